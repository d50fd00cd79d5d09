// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines always reach the output; exits non-zero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use extlip::corpus::run_fixture;
use extlip::report::Check;
use extlip::suite::{run_property, SuiteConfig};

const TOL: f64 = 1e-9;
const TIME_LIMIT: Duration = Duration::from_secs(1);

struct Outcome {
    ok: bool,
    detail: String,
}

fn summarize(checks: &[Check], extra_ok: bool, extra: String) -> Outcome {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    let mut detail = format!("{} checks, {} failed", checks.len(), failed.len());
    if let Some(c) = failed.first() {
        detail += &format!("; first: {} lhs {} rhs {} witness {}", c.property, c.lhs, c.rhs, c.witness);
    }
    if !extra.is_empty() {
        detail += &format!("; {extra}");
    }
    Outcome {
        ok: !checks.is_empty() && failed.is_empty() && extra_ok,
        detail,
    }
}

fn config(counts: &[(&str, usize)]) -> SuiteConfig {
    SuiteConfig {
        seed: 0,
        tol: TOL,
        counts: counts.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
        ..Default::default()
    }
}

fn properties(cfg: &SuiteConfig, ids: &[&str]) -> Vec<Check> {
    ids.iter()
        .flat_map(|id| run_property(id, cfg).expect("known property"))
        .collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn power_gap() -> Outcome {
    let (o, dt) = timed(|| run_fixture("xn-power").expect("fixture runs"));
    let expected = 10 * 3;
    summarize(
        &o.checks,
        o.checks.len() == expected && dt < TIME_LIMIT,
        format!("n = 1..10 on 1e5 points, {:.3} s (limit {:?})", dt.as_secs_f64(), TIME_LIMIT),
    )
}

fn phi_isometry() -> Outcome {
    let mut cfg = config(&[("transfer.phi-isometry", 200), ("transfer.phi-roundtrip", 200)]);
    cfg.max_points = 8;
    cfg.max_k = 3;
    let (checks, dt) = timed(|| properties(&cfg, &["transfer.phi-isometry", "transfer.phi-roundtrip"]));
    summarize(
        &checks,
        dt < TIME_LIMIT,
        format!("|M| <= 8, k <= 3, tol {TOL:e}, {:.3} s (limit {:?})", dt.as_secs_f64(), TIME_LIMIT),
    )
}

fn de_metric() -> Outcome {
    let cfg = config(&[("extbound.de-metric", 200)]);
    let checks = properties(&cfg, &["extbound.de-metric"]);
    let indiscernible = checks
        .iter()
        .filter(|c| c.property.ends_with("indiscernibles"))
        .count();
    summarize(&checks, indiscernible == 200, format!("200 triples, tol {TOL:e}"))
}

fn dilation_sandwich() -> Outcome {
    let mut cfg = config(&[("sequences.dilation-sandwich", 100)]);
    cfg.pairs_per_map = 50;
    cfg.max_seq_len = 6;
    let checks = properties(&cfg, &["sequences.dilation-sandwich"]);
    let singletons = checks.iter().filter(|c| c.property.ends_with("singleton-max")).count();
    summarize(&checks, singletons == 300, format!("100 maps x p in {{1, 2, inf}} x 50 pairs, tol {TOL:e}"))
}

fn tx_isometry() -> Outcome {
    let cfg = config(&[("sequences.tx-isometry", 100)]);
    summarize(&properties(&cfg, &["sequences.tx-isometry"]), true, format!("100 pairs, |M| <= 10, tol {TOL:e}"))
}

fn adjoint_norm() -> Outcome {
    let cfg = config(&[("dual.adjoint-norm", 200), ("dual.adjoint-functorial", 200)]);
    summarize(
        &properties(&cfg, &["dual.adjoint-norm", "dual.adjoint-functorial"]),
        true,
        format!("200 maps, tol {TOL:e}, functoriality exact"),
    )
}

fn evaluation_functionals() -> Outcome {
    let cfg = config(&[("dual.evaluation-norm", 100), ("dual.evaluation-separation", 100)]);
    summarize(
        &properties(&cfg, &["dual.evaluation-norm", "dual.evaluation-separation"]),
        true,
        format!("100 spaces, tol {TOL:e}"),
    )
}

fn gamma_embedding() -> Outcome {
    let cfg = config(&[("extbound.gamma-isometry", 100)]);
    summarize(&properties(&cfg, &["extbound.gamma-isometry"]), true, format!("100 samples, tol {TOL:e}"))
}

fn lambda_isometry() -> Outcome {
    let cfg = config(&[("dual.lambda-isometry", 100)]);
    let checks = properties(&cfg, &["dual.lambda-isometry"]);
    let qs = ["one", "two", "sup"]
        .iter()
        .all(|q| checks.iter().any(|c| c.property.ends_with(q)));
    summarize(&checks, qs, format!("100 maps over q in {{one, two, sup}}, tol {TOL:e}"))
}

fn p_monotonicity() -> Outcome {
    let cfg = config(&[("sequences.dp-monotone", 100)]);
    summarize(&properties(&cfg, &["sequences.dp-monotone"]), true, format!("100 pairs, tol {TOL:e}"))
}

fn pointwise_equivalence() -> Outcome {
    let cfg = config(&[("moduli.sup-ratio", 200)]);
    summarize(&properties(&cfg, &["moduli.sup-ratio"]), true, "200 instances, exact".into())
}

fn mutation_sensitivity() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corrupted-phi.suite.json");
    let text = std::fs::read_to_string(&path).expect("mutation fixture ships with the crate");
    let cfg: SuiteConfig = serde_json::from_str(&text).expect("fixture parses");
    let checks = properties(&cfg, &["transfer.phi-isometry"]);
    let failed = checks.iter().filter(|c| !c.passed()).count();
    Outcome {
        ok: cfg.mutation.is_some() && failed > 0,
        detail: format!("corrupted phi: {failed} of {} isometry checks fail as required", checks.len()),
    }
}

fn vanishing() -> Outcome {
    let o = run_fixture("plane4").expect("fixture runs");
    let names: Vec<&str> = o.checks.iter().map(|c| c.property.as_str()).collect();
    let needed = ["plane4/bisector-fixed-point", "plane4/bisector-vanishing", "plane4/indicator-not-fixed"];
    summarize(
        &o.checks,
        needed.iter().all(|n| names.contains(n)),
        "bisector fixture is a vanishing fixed point; indicator of x2 is not fixed".into(),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("power-function gap", power_gap),
        ("phi isometry", phi_isometry),
        ("d_e metric axioms", de_metric),
        ("dilation sandwich", dilation_sandwich),
        ("T_x isometry", tx_isometry),
        ("adjoint norm", adjoint_norm),
        ("evaluation functionals", evaluation_functionals),
        ("gamma embedding", gamma_embedding),
        ("lambda isometry", lambda_isometry),
        ("p-monotonicity and d_inf closed form", p_monotonicity),
        ("pointwise Lipschitz equivalence", pointwise_equivalence),
        ("mutation sensitivity", mutation_sensitivity),
        ("vanishing property", vanishing),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!("[{}] criterion {:2} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
