// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Every run prints one JSON report on standard
//! output and a short summary on standard error.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad
//! input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::corpus;
use crate::dual::{
    adjoint, adjoint_norm, dual_distance, dual_distance_oracle, is_p_continuous, lambda_norm, VERTEX_CAP,
};
use crate::error::{Error, Result};
use crate::extbound::{de_distance, e_constant};
use crate::gen;
use crate::io::{load_map, load_sample, load_space, read_space_file, LoadedMap, LoadedSpace, PointRef, SpaceFile};
use crate::metric::{Mapping, NormTag, PointedMetricSpace, VectorMap, DEFAULT_TOL};
use crate::moduli::{lip_at, lip_const, norm_lx, omega, omega_at, sampled_lip_quantities, sup_omega_ratio};
use crate::report::{AnalysisReport, Check, Provenance, ResultEntry};
use crate::sequences::{dilate, dilation_certificates, dp_distance, tx_operator_norm, PNorm, SequencePoint};
use crate::suite::{run_suite, Mutation, SuiteConfig};
use crate::transfer::{transfer_compose, vanishing_check};

pub const TOL_ENV: &str = "EXTLIP_TOL";

#[derive(Parser, Debug)]
#[command(name = "extlip", version, about = "Lipschitz and extensive-boundedness computations on finite pointed metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the metric axioms of a space file.
    CheckSpace {
        #[arg(long)]
        file: PathBuf,
    },
    /// Moduli, Lipschitz constants and e-constant of a map or sampled function.
    Analyze(AnalyzeArgs),
    /// The distance d_e between two maps with the same source and target.
    De {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// The sequence distance d_p(s, t).
    Dp {
        /// Exponent, at least 1, or `inf`.
        #[arg(long, default_value = "1")]
        p: PNorm,
        /// Space file or a built-in name (m3, plane4).
        #[arg(long)]
        space: String,
        /// Comma-separated labels; empty for the zero sequence.
        #[arg(long, default_value = "")]
        s: String,
        /// Second sequence, same format as `s`.
        #[arg(long, default_value = "")]
        t: String,
    },
    /// Distance between two evaluation functionals.
    Dual {
        #[arg(long)]
        space: String,
        #[arg(long)]
        x: String,
        /// Defaults to the base point.
        #[arg(long)]
        y: Option<String>,
    },
    /// Adjoint matrix and its norm for a base-preserving point map.
    Adjoint {
        #[arg(long)]
        map: PathBuf,
        /// A second map composed after the first, to check functoriality.
        #[arg(long)]
        then: Option<PathBuf>,
    },
    /// Dilation of a point map to sequences, with its certificates.
    Dilate(DilateArgs),
    /// Transfer of a map between two base points, with the vanishing check
    /// on coordinate spaces.
    Transfer {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        x1: String,
        #[arg(long)]
        x2: String,
    },
    /// Randomized verification of every invariant.
    Suite(SuiteArgs),
    /// Run the named example fixtures, or export them as files.
    Corpus {
        /// Fixture to run; repeatable. All fixtures when omitted.
        #[arg(long)]
        name: Vec<String>,
        /// Write the fixture files into this directory instead.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Point map or vector map file.
    #[arg(long, conflicts_with = "sample", required_unless_present = "sample")]
    map: Option<PathBuf>,
    /// Sampled real function file.
    #[arg(long)]
    sample: Option<PathBuf>,
    /// Point for the pointwise quantities; defaults to the base.
    #[arg(long)]
    at: Option<String>,
    /// Radii for the moduli of continuity.
    #[arg(long)]
    t: Vec<f64>,
    /// Read a vector map as taking values in the dual of (R^k, q).
    #[arg(long)]
    q: Option<NormTag>,
}

#[derive(Args, Debug)]
struct DilateArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long, default_value = "1")]
    p: PNorm,
    /// A sequence to dilate.
    #[arg(long)]
    s: Option<String>,
    /// A second sequence, paired with `s` in the certificates.
    #[arg(long)]
    t: Option<String>,
    /// Random sequence pairs to certify.
    #[arg(long, default_value_t = 50)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Suite configuration file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Instances per property, replacing the per-property defaults.
    #[arg(long)]
    instances: Option<usize>,
    /// Property id to run, such as `transfer.phi-isometry`; repeatable.
    #[arg(long)]
    only: Vec<String>,
    /// Deliberate defect to inject (`corrupted-phi`).
    #[arg(long)]
    mutation: Option<String>,
}

struct Run {
    report: AnalysisReport,
    inputs: Vec<Vec<u8>>,
    tol: f64,
}

impl Run {
    fn result(&mut self, name: &str, value: impl serde::Serialize, prov: Provenance) {
        self.report.push(ResultEntry::new(name, value, prov));
    }

    fn result_w(&mut self, name: &str, value: impl serde::Serialize, prov: Provenance, w: impl serde::Serialize) {
        self.report.push(ResultEntry::new(name, value, prov).with_witness(w));
    }

    fn check(&mut self, c: Check) {
        self.report.check(c);
    }

    fn read_file(&mut self, path: &Path) {
        if let Ok(bytes) = std::fs::read(path) {
            self.inputs.push(bytes);
        }
    }

    fn space_input(&mut self, m: &PointedMetricSpace) {
        let v = serde_json::to_vec(&SpaceFile::from_space(m)).unwrap_or_default();
        self.inputs.push(v);
    }
}

/// Parses `argv` (without the program name), runs the command and writes
/// the report to `out` and the summary to `err`. Returns the exit code.
pub fn run_command<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("extlip".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let tol = match std::env::var(TOL_ENV) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => t,
            _ => {
                let _ = writeln!(err, "error: {TOL_ENV}={v} is not a non-negative number");
                return 2;
            }
        },
        Err(_) => DEFAULT_TOL,
    };
    let mut run = Run {
        report: AnalysisReport::new(args.clone()),
        inputs: vec![args.join("\u{1f}").into_bytes()],
        tol,
    };
    let outcome = dispatch(cli.command, &mut run);
    if let Err(e) = outcome {
        let _ = writeln!(err, "error: {e}");
        if let Error::InvalidMetric(r) = &e {
            for v in &r.violations {
                let _ = writeln!(err, "  {v:?}");
            }
        }
        return 2;
    }
    run.report.set_inputs(run.inputs.iter().map(Vec::as_slice));
    run.report.finish();
    let _ = writeln!(out, "{}", run.report.to_json());
    let s = &run.report.summary;
    let _ = writeln!(
        err,
        "{}: {} results, {} checks, {} failed",
        args.first().map(String::as_str).unwrap_or(""),
        run.report.results.len(),
        s.checks,
        s.failed
    );
    for c in run.report.failures().take(10) {
        let mut w = c.witness.to_string();
        if w.chars().count() > 160 {
            w = w.chars().take(160).collect::<String>() + "...";
        }
        let _ = writeln!(err, "  FAIL {}: lhs {} rhs {} tol {} witness {w}", c.property, c.lhs, c.rhs, c.tolerance);
    }
    for n in &run.report.notes {
        let _ = writeln!(err, "  note: {n}");
    }
    if s.passed {
        0
    } else {
        1
    }
}

fn dispatch(cmd: Command, run: &mut Run) -> Result<()> {
    match cmd {
        Command::CheckSpace { file } => check_space(run, &file),
        Command::Analyze(a) => analyze(run, a),
        Command::De { map, other } => de(run, &map, &other),
        Command::Dp { p, space, s, t } => dp(run, p, &space, &s, &t),
        Command::Dual { space, x, y } => dual(run, &space, &x, y.as_deref()),
        Command::Adjoint { map, then } => adjoint_cmd(run, &map, then.as_deref()),
        Command::Dilate(a) => dilate_cmd(run, a),
        Command::Transfer { map, x1, x2 } => transfer(run, &map, &x1, &x2),
        Command::Suite(a) => suite(run, a),
        Command::Corpus { name, export } => corpus_cmd(run, &name, export.as_deref()),
    }
}

/// A label, or failing that a file-order index.
fn point(src: &LoadedSpace, s: &str) -> Result<usize> {
    match src.index(&PointRef::Label(s.to_string())) {
        Ok(i) => Ok(i),
        Err(e) => match s.parse::<usize>() {
            Ok(i) => src.index(&PointRef::Index(i)),
            Err(_) => Err(e),
        },
    }
}

fn loaded(space: Arc<PointedMetricSpace>) -> LoadedSpace {
    LoadedSpace {
        file_labels: space.labels().to_vec(),
        space,
        coords: None,
    }
}

/// A space file path, or a built-in fixture name.
fn space_arg(run: &mut Run, arg: &str) -> Result<LoadedSpace> {
    let path = Path::new(arg);
    if path.exists() {
        run.read_file(path);
        return load_space(path);
    }
    match corpus::named_space(arg) {
        Some(m) => {
            run.space_input(&m);
            Ok(loaded(m))
        }
        None => Err(Error::Load {
            path: arg.to_string(),
            msg: "no such file and no built-in space of that name (known: m3, plane4)".into(),
        }),
    }
}

fn map_arg(run: &mut Run, path: &Path) -> Result<LoadedMap> {
    run.read_file(path);
    let m = load_map(path)?;
    match &m {
        LoadedMap::Point { src, dst, .. } => {
            run.space_input(&src.space);
            run.space_input(&dst.space);
        }
        LoadedMap::Vector { src, .. } => run.space_input(&src.space),
    }
    Ok(m)
}

fn sequence(src: &LoadedSpace, s: &str) -> Result<SequencePoint> {
    let idx = crate::io::parse_label_list(s)
        .iter()
        .map(|l| point(src, l))
        .collect::<Result<Vec<_>>>()?;
    SequencePoint::new(src.space.clone(), idx)
}

fn labelled_values(m: &VectorMap) -> Value {
    let src = m.src();
    let mut obj = Map::new();
    for i in 0..src.len() {
        obj.insert(src.label(i).to_string(), json!(m.value(i)));
    }
    Value::Object(obj)
}

fn check_space(run: &mut Run, file: &Path) -> Result<()> {
    run.read_file(file);
    let f = read_space_file(file)?;
    let report = f.validate().map_err(|e| Error::Load {
        path: file.display().to_string(),
        msg: e.to_string(),
    })?;
    if !report.is_valid() {
        let described: Vec<String> = report.violations.iter().map(|v| v.describe(&f.labels)).collect();
        return Err(Error::Load {
            path: file.display().to_string(),
            msg: format!("metric axioms violated: {}", described.join("; ")),
        });
    }
    let space = f.load()?;
    run.result("points", space.space.len(), Provenance::ClosedForm);
    run.result("base", space.space.label(0), Provenance::ClosedForm);
    let is_valid = space.space.validate().is_valid();
    run.check(Check::holds("metric-axioms", is_valid, json!({"file": file.display().to_string()})));
    Ok(())
}

fn moduli_report<F: Mapping>(run: &mut Run, f: &F, x0: usize, ts: &[f64]) -> Result<Option<f64>> {
    let m = f.src();
    let lc = lip_const(f);
    run.result_w("lip_const", lc.value, Provenance::ClosedForm, pair_labels(m, lc.witness));
    let la = lip_at(f, x0)?;
    run.result_w("lip_at", la.value, Provenance::ClosedForm, json!({"at": m.label(x0), "witness": la.witness.map(|x| m.label(x))}));
    let sr = sup_omega_ratio(f, x0)?;
    run.result_w("sup_omega_ratio", sr.value, Provenance::ClosedForm, json!({"witness": sr.witness.map(|x| m.label(x))}));
    run.check(Check::exact("sup-omega-ratio-equals-lip-at", sr.value, la.value, json!({"at": m.label(x0)})));
    run.check(Check::at_most("lip-at-below-lip-const", la.value, lc.value, run.tol, pair_labels(m, lc.witness)));
    for &t in ts {
        let w = omega(f, t)?;
        let wa = omega_at(f, x0, t)?;
        run.result_w("omega", json!({"t": t, "value": w.value}), Provenance::ClosedForm, pair_labels(m, w.witness));
        run.result_w("omega_at", json!({"t": t, "value": wa.value}), Provenance::ClosedForm, pair_labels(m, wa.witness));
        run.check(Check::at_most("omega-at-below-omega", wa.value, w.value, run.tol, json!({"t": t})));
    }
    match e_constant(f, run.tol) {
        Ok(e) => {
            run.result_w("e_constant", e.value, Provenance::ClosedForm, json!({"witness": e.witness.map(|x| m.label(x))}));
            run.check(Check::at_most("e-constant-below-lip-const", e.value, lc.value, run.tol, json!({"witness": e.witness.map(|x| m.label(x))})));
            Ok(Some(e.value))
        }
        Err(Error::BaseNotPreserved(d)) => {
            run.report.notes.push(format!("the map moves the base point (distance {d}); e_constant is undefined"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn pair_labels(m: &PointedMetricSpace, w: Option<(usize, usize)>) -> Value {
    json!(w.map(|(i, j)| [m.label(i), m.label(j)]))
}

fn analyze(run: &mut Run, a: AnalyzeArgs) -> Result<()> {
    if let Some(path) = &a.sample {
        run.read_file(path);
        let f = load_sample(path)?;
        let q = sampled_lip_quantities(&f, run.tol)?;
        run.result_w("e_const", q.e_const, Provenance::Sampled, json!({"x": q.e_witness}));
        run.result_w("lip_est", q.lip_est, Provenance::Sampled, json!({"interval": q.lip_witness}));
        run.check(Check::at_most("e-const-below-lip-est", q.e_const, q.lip_est, run.tol, json!({"x": q.e_witness})));
        return Ok(());
    }
    let path = a.map.as_deref().expect("clap requires --map or --sample");
    match map_arg(run, path)? {
        LoadedMap::Point { map, src, .. } => {
            let x0 = a.at.as_deref().map(|s| point(&src, s)).transpose()?.unwrap_or(0);
            moduli_report(run, &map, x0, &a.t)?;
        }
        LoadedMap::Vector { map, src } => {
            let x0 = a.at.as_deref().map(|s| point(&src, s)).transpose()?.unwrap_or(0);
            moduli_report(run, &map, x0, &a.t)?;
            run.result("norm_lx", norm_lx(&map, x0)?, Provenance::ClosedForm);
            run.check(Check::holds("p-continuity", is_p_continuous(&map), json!({"k": map.k()})));
            if let Some(q) = a.q {
                let l = lambda_norm(&map, q, run.tol)?;
                run.result("t_e_norm", l.t_e_norm, Provenance::ClosedForm);
                run.result("lambda_opnorm", l.lambda_opnorm, Provenance::Oracle);
                run.check(Check::approx("lambda-isometry", l.t_e_norm, l.lambda_opnorm, run.tol, json!({"q": q})));
            }
        }
    }
    Ok(())
}

fn de(run: &mut Run, a: &Path, b: &Path) -> Result<()> {
    let (ma, mb) = (map_arg(run, a)?, map_arg(run, b)?);
    let (ab, ba, m) = match (&ma, &mb) {
        (LoadedMap::Point { map: t, .. }, LoadedMap::Point { map: s, .. }) => {
            (de_distance(t, s, run.tol)?, de_distance(s, t, run.tol)?, t.src_space().clone())
        }
        (LoadedMap::Vector { map: t, .. }, LoadedMap::Vector { map: s, .. }) => {
            (de_distance(t, s, run.tol)?, de_distance(s, t, run.tol)?, t.src_space().clone())
        }
        _ => return Err(Error::Invalid("d_e needs two point maps or two vector maps".into())),
    };
    let w = json!({"witness": ab.witness.map(|x| m.label(x))});
    run.result_w("d_e", ab.value, Provenance::ClosedForm, w.clone());
    run.check(Check::exact("d-e-symmetric", ab.value, ba.value, w));
    Ok(())
}

fn dp(run: &mut Run, p: PNorm, space: &str, s: &str, t: &str) -> Result<()> {
    let src = space_arg(run, space)?;
    let (s, t) = (sequence(&src, s)?, sequence(&src, t)?);
    let d = dp_distance(p, &s, &t, VERTEX_CAP)?;
    run.result_w("d_p", d.value, Provenance::Oracle, json!({"p": p, "s": s, "t": t, "vertex": d.witness}));
    if let Some(c) = d.closed_form {
        run.result("d_inf_closed_form", c, Provenance::ClosedForm);
        run.check(Check::approx("d-inf-closed-form", c, d.value, run.tol, json!({"s": s, "t": t})));
    }
    match tx_operator_norm(p, &s, &t, VERTEX_CAP) {
        Ok(op) => {
            run.result("operator_norm", op, Provenance::Oracle);
            run.check(Check::approx("operator-norm-equals-d-p", op, d.value, run.tol, json!({"s": s, "t": t})));
        }
        Err(Error::Capacity { points, cap }) => run
            .report
            .notes
            .push(format!("operator-norm cross-check skipped: {points} points exceed the vertex cap {cap}")),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn dual(run: &mut Run, space: &str, x: &str, y: Option<&str>) -> Result<()> {
    let src = space_arg(run, space)?;
    let m = src.space.clone();
    let xi = point(&src, x)?;
    let yi = y.map(|y| point(&src, y)).transpose()?.unwrap_or(0);
    let w = json!({"x": m.label(xi), "y": m.label(yi)});
    let d = dual_distance(&m, xi, yi)?;
    run.result_w("dual_distance", d, Provenance::ClosedForm, w.clone());
    run.check(Check::at_most("dominates-metric", m.d(xi, yi), d, run.tol, w.clone()));
    match dual_distance_oracle(&m, xi, yi, VERTEX_CAP) {
        Ok(o) => {
            run.result("dual_distance_oracle", o, Provenance::Oracle);
            run.check(Check::approx("closed-form-equals-oracle", d, o, run.tol, w));
        }
        Err(Error::Capacity { points, cap }) => run
            .report
            .notes
            .push(format!("vertex oracle skipped: {points} points exceed the cap {cap}")),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn point_map(run: &mut Run, path: &Path) -> Result<crate::metric::PointMap> {
    match map_arg(run, path)? {
        LoadedMap::Point { map, .. } => Ok(map),
        LoadedMap::Vector { .. } => Err(Error::Load {
            path: path.display().to_string(),
            msg: "expected a point map (with `table`)".into(),
        }),
    }
}

fn adjoint_cmd(run: &mut Run, path: &Path, then: Option<&Path>) -> Result<()> {
    let t = point_map(run, path)?;
    let a = adjoint(&t)?;
    run.result("adjoint_matrix", &a, Provenance::ClosedForm);
    let n = adjoint_norm(&t, VERTEX_CAP)?;
    let e = e_constant(&t, run.tol)?;
    run.result("adjoint_norm", n.closed_form, Provenance::ClosedForm);
    run.result("e_constant", e.value, Provenance::ClosedForm);
    run.check(Check::approx("adjoint-norm-equals-e-constant", n.closed_form, e.value, run.tol, json!({"witness": e.witness})));
    match n.oracle {
        Some(o) => {
            run.result("adjoint_norm_oracle", o, Provenance::Oracle);
            run.check(Check::approx("adjoint-norm-oracle", n.closed_form, o, run.tol, json!({"witness": e.witness})));
        }
        None => run.report.notes.push("vertex oracle skipped: target exceeds the vertex cap".into()),
    }
    if let Some(p) = then {
        let s = point_map(run, p)?;
        let lhs = adjoint(&t.then(&s)?)?;
        let rhs = a.mul(&adjoint(&s)?)?;
        run.check(Check::holds("functoriality", lhs == rhs, json!({"composite": lhs.entries, "product": rhs.entries})));
    }
    Ok(())
}

fn dilate_cmd(run: &mut Run, a: DilateArgs) -> Result<()> {
    let t = point_map(run, &a.map)?;
    let src = loaded(t.src_space().clone());
    let mut pairs = Vec::new();
    if let Some(s) = &a.s {
        let s = sequence(&src, s)?;
        run.result("dilated", dilate(&t, &s)?, Provenance::ClosedForm);
        let u = match &a.t {
            Some(u) => sequence(&src, u)?,
            None => SequencePoint::zero(src.space.clone()),
        };
        pairs.push((s, u));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    for _ in 0..a.pairs {
        pairs.push((
            gen::random_sequence(&mut rng, &src.space, 6),
            gen::random_sequence(&mut rng, &src.space, 6),
        ));
    }
    let r = dilation_certificates(a.p, &t, &pairs, VERTEX_CAP, run.tol)?;
    run.result("e_constant", r.e_constant, Provenance::ClosedForm);
    run.result("singleton_ratios", &r.singleton_ratios, Provenance::Oracle);
    run.result("de_ratio_max", r.de_ratio_max, Provenance::Oracle);
    run.result("lip_estimate", r.lip_estimate, Provenance::Oracle);
    for pc in &r.pairs {
        run.check(Check::at_most("pair-bound", pc.dilated, pc.bound, run.tol, json!({"s": pc.s, "t": pc.t})));
    }
    run.check(Check::approx("singleton-max-equals-e-constant", r.singleton_max, r.e_constant, run.tol, json!({"ratios": r.singleton_ratios})));
    run.check(Check::holds(
        "sandwich",
        r.chain_holds,
        json!({"e": r.e_constant, "de_ratio": r.de_ratio_max, "lip": r.lip_estimate}),
    ));
    Ok(())
}

fn transfer(run: &mut Run, path: &Path, x1: &str, x2: &str) -> Result<()> {
    let (f, src) = match map_arg(run, path)? {
        LoadedMap::Vector { map, src } => (map, src),
        LoadedMap::Point { .. } => {
            return Err(Error::Load {
                path: path.display().to_string(),
                msg: "transfer needs a vector map (with `values`)".into(),
            })
        }
    };
    let (i1, i2) = (point(&src, x1)?, point(&src, x2)?);
    let tr = transfer_compose(i1, i2, &f)?;
    run.result("composed", labelled_values(&tr.composed), Provenance::ClosedForm);
    run.result("closed_form", labelled_values(&tr.closed_form), Provenance::ClosedForm);
    run.check(Check::approx("composed-equals-closed-form", tr.discrepancy(), 0.0, run.tol, json!({"x1": x1, "x2": x2})));
    if let Some(c) = &src.coords {
        let r = vanishing_check(c, &f, i1, i2, run.tol)?;
        run.result("is_fixed_point", r.is_fixed_point, Provenance::ClosedForm);
        run.result("vanishing_holds", r.vanishing_holds, Provenance::ClosedForm);
        let w: Vec<Value> = r
            .violations
            .iter()
            .map(|v| json!({"point": src.space.label(v.point), "value_norm": v.value_norm, "dist_gap": v.dist_gap}))
            .collect();
        run.check(Check::holds("fixed-point-vanishes", r.passes(), w));
    } else {
        run.report.notes.push("the space has no coordinates; vanishing check skipped".into());
    }
    Ok(())
}

fn suite(run: &mut Run, a: SuiteArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => {
            run.read_file(p);
            let text = std::fs::read_to_string(p).map_err(|e| Error::Load {
                path: p.display().to_string(),
                msg: e.to_string(),
            })?;
            serde_json::from_str::<SuiteConfig>(&text).map_err(|e| Error::Load {
                path: p.display().to_string(),
                msg: e.to_string(),
            })?
        }
        None => SuiteConfig::default(),
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if a.instances.is_some() {
        cfg.instances = a.instances;
    }
    if !a.only.is_empty() {
        cfg.only = a.only;
    }
    if let Some(m) = a.mutation {
        cfg.mutation = Some(
            serde_json::from_value::<Mutation>(Value::String(m.clone()))
                .map_err(|_| Error::Invalid(format!("unknown mutation `{m}`")))?,
        );
    }
    if std::env::var(TOL_ENV).is_ok() {
        cfg.tol = run.tol;
    }
    let r = run_suite(&cfg)?;
    run.report.results = r.results;
    run.report.checks = r.checks;
    run.report.notes = r.notes;
    run.inputs.push(serde_json::to_vec(&cfg)?);
    Ok(())
}

fn corpus_cmd(run: &mut Run, names: &[String], export: Option<&Path>) -> Result<()> {
    if let Some(dir) = export {
        let written = corpus::export(dir)?;
        run.result("written", written, Provenance::ClosedForm);
        return Ok(());
    }
    let r = corpus::run_corpus(names)?;
    run.report.results = r.results;
    run.report.checks = r.checks;
    run.report.notes = r.notes;
    Ok(())
}
