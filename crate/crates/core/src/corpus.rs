// SPDX-License-Identifier: Apache-2.0

//! Named instances with their expected values.
//!
//! Discrete fixtures are shipped as JSON under `fixtures/` and can be
//! regenerated with [`export`]. Sampled functions are rebuilt from
//! deterministic uniform grids, since their sizes make files impractical.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use serde_json::json;

use crate::dual::{adjoint_norm, dual_distance, dual_distance_oracle, lambda_norm, VERTEX_CAP};
use crate::error::{Error, Result};
use crate::extbound::{de_distance, e_constant, reciprocal_space_check};
use crate::io::{point_map_file, vector_map_file, SampleFile, SpaceFile};
use crate::metric::{
    induced_space, uniform_grid, CoordSpace, NormTag, PointMap, PointedMetricSpace, RealFunctionSample, VectorMap,
    DEFAULT_TOL,
};
use crate::moduli::{lip_at, lip_const, norm_lx, omega, sampled_lip_quantities};
use crate::report::{AnalysisReport, Check, Provenance, ResultEntry};
use crate::sequences::{dilation_certificates, dp_distance, PNorm, SequencePoint};
use crate::transfer::{phi, phi_inv, transfer_compose, vanishing_check};

/// Grid size for the power functions on `[0, 1]`.
pub const POWER_GRID: usize = 100_000;
/// Grid size for `x·sin(x)` on `[-8π, 8π]`; odd so that 0 is a grid point.
pub const XSINX_GRID: usize = 1_000_001;

pub struct Fixture {
    pub name: &'static str,
    pub claim: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "m3", claim: "three-point space: swap map moduli, e-constant, dual and sequence values" },
    Fixture { name: "xn-power", claim: "x^n on [0, 1]: e-constant 1 while the Lipschitz constant is n" },
    Fixture { name: "xsinx", claim: "x sin x: e-constant 1, Lipschitz estimate grows with the range" },
    Fixture { name: "x-squared", claim: "x^2 on [-R, R]: e-constant R, unbounded as R grows" },
    Fixture { name: "reciprocal", claim: "functions on {1/n} with f(0) = 0: e-constant max n|x_n|" },
    Fixture { name: "plane4", claim: "planar transfer fixed points vanish off the bisector" },
];

#[derive(Clone, Debug, Default)]
pub struct FixtureOutcome {
    pub results: Vec<ResultEntry>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl FixtureOutcome {
    fn result(&mut self, name: String, value: impl serde::Serialize, prov: Provenance) {
        self.results.push(ResultEntry::new(name, value, prov));
    }
}

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// `{0, a, b}` with `d(0,a) = 1`, `d(0,b) = 2`, `d(a,b) = 1.5`.
pub fn m3() -> Arc<PointedMetricSpace> {
    let dist = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.5], vec![2.0, 1.5, 0.0]];
    Arc::new(PointedMetricSpace::new(labels(&["0", "a", "b"]), 0, dist).expect("fixture is a metric"))
}

/// `a ↔ b` on [`m3`].
pub fn swap(m: &Arc<PointedMetricSpace>) -> PointMap {
    PointMap::new(m.clone(), m.clone(), vec![0, 2, 1]).expect("fixture table is in range")
}

/// `{(0,0), (-1,0), (1,0), (0,1)}` in the Euclidean plane, origin as base.
pub fn plane4() -> CoordSpace {
    CoordSpace::new(
        labels(&["o", "x1", "x2", "top"]),
        0,
        vec![vec![0.0, 0.0], vec![-1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        NormTag::Two,
    )
    .expect("fixture coordinates are valid")
}

/// `β` at the top of the bisector, zero elsewhere.
pub fn plane4_bisector(m: &Arc<PointedMetricSpace>, beta: f64) -> VectorMap {
    VectorMap::scalar(m.clone(), &[0.0, 0.0, 0.0, beta]).expect("finite values")
}

/// Indicator of `x2`.
pub fn plane4_x2_indicator(m: &Arc<PointedMetricSpace>) -> VectorMap {
    VectorMap::scalar(m.clone(), &[0.0, 0.0, 1.0, 0.0]).expect("finite values")
}

/// Discrete spaces known by name on the command line.
pub fn named_space(name: &str) -> Option<Arc<PointedMetricSpace>> {
    match name {
        "m3" => Some(m3()),
        "plane4" => Some(Arc::new(induced_space(&plane4()).expect("fixture is a metric"))),
        _ => None,
    }
}

/// `x^n` on the uniform `[0, 1]` grid.
pub fn power_sample(n: i32, points: usize) -> Result<RealFunctionSample> {
    RealFunctionSample::from_fn(uniform_grid(0.0, 1.0, points), |x| x.powi(n))
}

pub fn xsinx_sample(range: f64, points: usize) -> Result<RealFunctionSample> {
    RealFunctionSample::from_fn(uniform_grid(-range, range, points), |x| x * x.sin())
}

pub fn square_sample(range: f64, points: usize) -> Result<RealFunctionSample> {
    RealFunctionSample::from_fn(uniform_grid(-range, range, points), |x| x * x)
}

fn run_m3() -> Result<FixtureOutcome> {
    let mut out = FixtureOutcome::default();
    let m = m3();
    let t = swap(&m);
    let id = PointMap::identity(m.clone());
    let tol = DEFAULT_TOL;
    let (a, b) = (1, 2);

    let v = lip_at(&t, 0)?;
    out.checks.push(Check::exact("m3/swap-lip-at-base", v.value, 2.0, json!({"witness": v.witness})));
    let v = e_constant(&t, tol)?;
    out.result("m3/swap-e-constant".into(), v.value, Provenance::ClosedForm);
    out.checks.push(Check::exact("m3/swap-e-constant", v.value, 2.0, json!({"witness": v.witness})));
    let v = lip_const(&t);
    out.checks.push(Check::exact("m3/swap-lip-const", v.value, 2.0, json!({"witness": v.witness})));
    let v = omega(&t, 1.0)?;
    out.checks.push(Check::exact("m3/swap-omega-at-1", v.value, 2.0, json!({"witness": v.witness})));
    let v = de_distance(&t, &id, tol)?;
    out.checks.push(Check::exact("m3/de-swap-identity", v.value, 1.5, json!({"witness": v.witness})));

    let h = VectorMap::scalar(m.clone(), &[3.0, 1.0, -2.0])?;
    let g = phi(0, &h)?;
    out.checks.push(Check::exact("m3/phi-example", g.max_abs_diff(&VectorMap::scalar(m.clone(), &[3.0, 4.0, -1.0])?), 0.0, json!({"g": g.values()})));
    out.checks.push(Check::exact("m3/phi-round-trip", phi_inv(0, &g)?.max_abs_diff(&h), 0.0, json!({"h": h.values()})));
    out.checks.push(Check::exact("m3/norm-lx-example", norm_lx(&g, 0)?, 3.0, json!({"x0": "0"})));

    let f = VectorMap::scalar(m.clone(), &[1.0, 0.0, 2.0])?;
    let tr = transfer_compose(a, b, &f)?;
    out.checks.push(Check::approx("m3/transfer-at-base", tr.closed_form.value(0)[0], 10.0 / 3.0, tol, json!({"x1": "a", "x2": "b"})));
    out.checks.push(Check::approx("m3/transfer-composed-at-base", tr.composed.value(0)[0], 10.0 / 3.0, tol, json!({"x1": "a", "x2": "b"})));

    out.checks.push(Check::exact("m3/dual-distance-a-b", dual_distance(&m, a, b)?, 3.0, json!({"pair": ["a", "b"]})));
    out.checks.push(Check::exact("m3/dual-oracle-a-b", dual_distance_oracle(&m, a, b, VERTEX_CAP)?, 3.0, json!({"pair": ["a", "b"]})));
    let an = adjoint_norm(&t, VERTEX_CAP)?;
    out.checks.push(Check::exact("m3/adjoint-norm", an.closed_form, 2.0, json!({"oracle": an.oracle})));
    out.checks.push(Check::exact("m3/adjoint-norm-oracle", an.oracle.unwrap_or(f64::NAN), 2.0, json!({"closed_form": an.closed_form})));

    let one = PNorm::Finite(1.0);
    let s = SequencePoint::from_labels(m.clone(), &["a"])?;
    let u = SequencePoint::from_labels(m.clone(), &["b"])?;
    let d = dp_distance(one, &s, &u, VERTEX_CAP)?;
    out.result("m3/d1-a-b".into(), d.value, Provenance::Oracle);
    out.checks.push(Check::exact("m3/d1-a-b", d.value, 3.0, json!({"vertex": d.witness})));
    let s = SequencePoint::from_labels(m.clone(), &["a", "a"])?;
    let u = SequencePoint::from_labels(m.clone(), &["b", "0"])?;
    let d = dp_distance(one, &s, &u, VERTEX_CAP)?;
    out.checks.push(Check::exact("m3/d1-coupled", d.value, 4.0, json!({"vertex": d.witness})));

    let r = dilation_certificates(one, &t, &[], VERTEX_CAP, tol)?;
    out.checks.push(Check::exact("m3/dilation-singleton-max", r.singleton_max, 2.0, json!({"ratios": r.singleton_ratios})));

    let vm = VectorMap::new(m.clone(), 2, NormTag::Two, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]])?;
    for (q, expect) in [(NormTag::Two, 1.0), (NormTag::Sup, 1.0), (NormTag::One, 1.0)] {
        let l = lambda_norm(&vm, q, tol)?;
        let name = format!("m3/lambda-{}", q.as_str());
        out.checks.push(Check::approx(name.clone(), l.t_e_norm, l.lambda_opnorm, tol, json!({"q": q})));
        out.checks.push(Check::approx(name + "-value", l.t_e_norm, expect, tol, json!({"q": q})));
    }
    Ok(out)
}

fn run_power() -> Result<FixtureOutcome> {
    let mut out = FixtureOutcome::default();
    for n in 1..=10 {
        let f = power_sample(n, POWER_GRID)?;
        let q = sampled_lip_quantities(&f, DEFAULT_TOL)?;
        let nf = n as f64;
        let w = json!({"n": n, "points": POWER_GRID, "e_at": q.e_witness, "slope_at": q.lip_witness});
        out.result(format!("xn-power/{n}/e-const"), q.e_const, Provenance::Sampled);
        out.result(format!("xn-power/{n}/lip-est"), q.lip_est, Provenance::Sampled);
        out.checks.push(Check::exact(format!("xn-power/{n}/e-const"), q.e_const, 1.0, w.clone()));
        out.checks.push(Check::at_most(format!("xn-power/{n}/lip-est-below-n"), q.lip_est, nf, 0.0, w.clone()));
        out.checks.push(Check::at_most(format!("xn-power/{n}/lip-est-near-n"), nf * (1.0 - 1e-3), q.lip_est, 0.0, w));
    }
    Ok(out)
}

fn run_xsinx() -> Result<FixtureOutcome> {
    let mut out = FixtureOutcome::default();
    let full = 8.0 * PI;
    let step = 2.0 * full / (XSINX_GRID - 1) as f64;
    for mult in [2.0, 4.0, 8.0] {
        let range = mult * PI;
        // same spacing as the full grid
        let points = (2.0 * range / step).round() as usize + 1;
        let f = xsinx_sample(range, points)?;
        let q = sampled_lip_quantities(&f, DEFAULT_TOL)?;
        let tag = format!("xsinx/{}pi", mult as u32);
        let w = json!({"range": range, "points": points, "e_at": q.e_witness, "slope_at": q.lip_witness});
        out.result(format!("{tag}/e-const"), q.e_const, Provenance::Sampled);
        out.result(format!("{tag}/lip-est"), q.lip_est, Provenance::Sampled);
        out.checks.push(Check::approx(format!("{tag}/e-const"), q.e_const, 1.0, 1e-3, w.clone()));
        out.checks.push(Check::at_most(format!("{tag}/lip-est-reaches-range"), range * (1.0 - 1e-3), q.lip_est, 0.0, w.clone()));
        out.checks.push(Check::at_most(format!("{tag}/lip-est-bounded"), q.lip_est, range + 1.0, 0.0, w));
    }
    let f = |x: f64| x * x.sin();
    let gaps: Vec<f64> = (1..=6)
        .map(|n| {
            let x = 2.0 * PI * n as f64;
            f(x + 1.0 / n as f64) - f(x)
        })
        .collect();
    out.notes.push(format!(
        "xsinx: f(2n pi + 1/n) - f(2n pi) for n = 1..6 is {:?}, approaching 2 pi = {:.6}, so f is not uniformly continuous",
        gaps.iter().map(|g| format!("{g:.6}")).collect::<Vec<_>>(),
        2.0 * PI
    ));
    Ok(out)
}

fn run_square() -> Result<FixtureOutcome> {
    let mut out = FixtureOutcome::default();
    for range in [10.0, 100.0] {
        let f = square_sample(range, 20_001)?;
        let q = sampled_lip_quantities(&f, DEFAULT_TOL)?;
        let tag = format!("x-squared/R={range}");
        out.result(format!("{tag}/e-const"), q.e_const, Provenance::Sampled);
        out.checks.push(Check::exact(format!("{tag}/e-const"), q.e_const, range, json!({"e_at": q.e_witness})));
    }
    Ok(out)
}

fn run_reciprocal() -> Result<FixtureOutcome> {
    let mut out = FixtureOutcome::default();
    let cases: [(&str, fn(f64) -> f64, usize, f64); 5] = [
        ("inverse", |n| 1.0 / n, 100, 1.0),
        ("alternating-square", |n| (-1f64).powi(n as i32) / (n * n), 100, 1.0),
        ("inverse-sqrt", |n| 1.0 / n.sqrt(), 100, 10.0),
        ("inverse-sqrt", |n| 1.0 / n.sqrt(), 400, 20.0),
        ("inverse", |n| 1.0 / n, 400, 1.0),
    ];
    for (name, f, len, expect) in cases {
        let vals: Vec<f64> = (1..=len).map(|n| f(n as f64)).collect();
        let r = reciprocal_space_check(&vals)?;
        let tag = format!("reciprocal/{name}/N={len}");
        out.result(tag.clone(), r.k, Provenance::ClosedForm);
        out.checks.push(Check::approx(tag, r.k, expect, 1e-12, json!({"n": r.witness_n})));
    }
    out.notes.push("reciprocal: for 1/sqrt(n) the constant grows like sqrt(N), so the full sequence has no finite constant".into());
    Ok(out)
}

fn run_plane4() -> Result<FixtureOutcome> {
    let mut out = FixtureOutcome::default();
    let c = plane4();
    let m = Arc::new(induced_space(&c)?);
    let (x1, x2) = (1, 2);
    let r = vanishing_check(&c, &plane4_bisector(&m, 7.0), x1, x2, DEFAULT_TOL)?;
    out.checks.push(Check::holds("plane4/bisector-fixed-point", r.is_fixed_point, json!({"violations": r.violations})));
    out.checks.push(Check::holds("plane4/bisector-vanishing", r.vanishing_holds, json!({"violations": r.violations})));
    let r = vanishing_check(&c, &plane4_x2_indicator(&m), x1, x2, DEFAULT_TOL)?;
    out.checks.push(Check::holds("plane4/indicator-not-fixed", !r.is_fixed_point, json!({"violations": r.violations})));
    out.checks.push(Check::holds("plane4/indicator-implication", r.passes(), json!({"violations": r.violations})));
    Ok(out)
}

pub fn run_fixture(name: &str) -> Result<FixtureOutcome> {
    match name {
        "m3" => run_m3(),
        "xn-power" => run_power(),
        "xsinx" => run_xsinx(),
        "x-squared" => run_square(),
        "reciprocal" => run_reciprocal(),
        "plane4" => run_plane4(),
        other => Err(Error::Invalid(format!(
            "unknown fixture `{other}`; known: {}",
            FIXTURES.iter().map(|f| f.name).collect::<Vec<_>>().join(", ")
        ))),
    }
}

/// Runs the named fixtures, or all of them.
pub fn run_corpus(names: &[String]) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::new(vec!["corpus".into()]);
    let selected: Vec<&Fixture> = if names.is_empty() {
        FIXTURES.iter().collect()
    } else {
        names
            .iter()
            .map(|n| {
                FIXTURES
                    .iter()
                    .find(|f| f.name == n)
                    .ok_or_else(|| Error::Invalid(format!("unknown fixture `{n}`")))
            })
            .collect::<Result<_>>()?
    };
    let joined: Vec<&str> = selected.iter().map(|f| f.name).collect();
    report.set_inputs(joined.iter().map(|s| s.as_bytes()));
    for fx in selected {
        let o = run_fixture(fx.name)?;
        report.push(ResultEntry::new(format!("{}/claim", fx.name), fx.claim, Provenance::ClosedForm));
        report.results.extend(o.results);
        report.extend_checks(o.checks);
        report.notes.extend(o.notes);
    }
    report.finish();
    Ok(report)
}

/// Writes the discrete fixtures and small sampled functions to `dir`.
pub fn export(dir: &Path) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, v: &dyn erased::Json| -> Result<()> {
        v.write(&dir.join(name))?;
        written.push(name.to_string());
        Ok(())
    };
    let m = m3();
    put("m3.space.json", &SpaceFile::from_space(&m))?;
    put("swap.map.json", &point_map_file(&swap(&m), "m3.space.json", "m3.space.json"))?;
    let h = VectorMap::scalar(m.clone(), &[3.0, 1.0, -2.0])?;
    put("m3-h.map.json", &vector_map_file(&h, "m3.space.json"))?;
    let bad = SpaceFile {
        dist: Some(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 5.0], vec![2.0, 5.0, 0.0]]),
        ..SpaceFile::from_space(&m)
    };
    put("bad.space.json", &bad)?;

    let c = plane4();
    let pm = Arc::new(induced_space(&c)?);
    put("plane4.space.json", &SpaceFile::from_coords(&c))?;
    put("plane4-bisector.map.json", &vector_map_file(&plane4_bisector(&pm, 7.0), "plane4.space.json"))?;
    put("plane4-x2-indicator.map.json", &vector_map_file(&plane4_x2_indicator(&pm), "plane4.space.json"))?;

    let f = power_sample(5, 1001)?;
    put("x5.sample.json", &SampleFile { grid: f.grid().to_vec(), values: f.values().to_vec() })?;
    let f = square_sample(10.0, 2001)?;
    put("x-squared-10.sample.json", &SampleFile { grid: f.grid().to_vec(), values: f.values().to_vec() })?;

    put(
        "corrupted-phi.suite.json",
        &json!({"seed": 0, "mutation": "corrupted-phi", "only": ["transfer.phi-isometry"], "counts": {"transfer.phi-isometry": 200}}),
    )?;
    Ok(written)
}

mod erased {
    use std::path::Path;

    use serde::Serialize;

    use crate::error::Result;
    use crate::io::write_json;

    pub trait Json {
        fn write(&self, path: &Path) -> Result<()>;
    }

    impl<T: Serialize> Json for T {
        fn write(&self, path: &Path) -> Result<()> {
            write_json(path, self)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_fixtures_pass() {
        for name in ["m3", "reciprocal", "plane4", "x-squared"] {
            let o = run_fixture(name).unwrap();
            let bad: Vec<_> = o.checks.iter().filter(|c| !c.passed()).collect();
            assert!(bad.is_empty(), "{bad:#?}");
        }
    }
}
