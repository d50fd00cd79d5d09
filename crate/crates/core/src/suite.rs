// SPDX-License-Identifier: Apache-2.0

//! Randomized verification of every invariant of the library.
//!
//! Each property draws its own instances from a ChaCha stream selected by
//! the property's position in [`PROPERTIES`], so results do not depend on
//! which other properties run.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dual::{
    adjoint, adjoint_norm, dual_distance, dual_distance_oracle, is_p_continuous, lambda_norm,
    second_adjoint_eval, Functional, VERTEX_CAP,
};
use crate::error::{Error, Result};
use crate::extbound::{de_distance, e_constant, BallEmbedding};
use crate::gen;
use crate::metric::{
    induced_space, restrict_to_ball, NormTag, PointMap, PointedMetricSpace, VectorMap,
    DEFAULT_TOL,
};
use crate::moduli::{lip_at, lip_const, norm_lx, omega, omega_at, sup_omega_ratio};
use crate::report::{AnalysisReport, Check, Provenance, ResultEntry};
use crate::sequences::{
    dilate, dilation_certificates, dp_distance, dp_norm, tx_operator_norm, PNorm, SequencePoint,
};
use crate::transfer::{phi, phi_inv, transfer_compose, vanishing_check};

/// Deliberate defects used to confirm that the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Replaces `d(x', x)·h(x') + h(x)` with `h(x') + h(x)`.
    CorruptedPhi,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides every property's default instance count.
    pub instances: Option<usize>,
    /// Per-property instance counts; wins over `instances`.
    pub counts: BTreeMap<String, usize>,
    pub max_points: usize,
    pub max_seq_len: usize,
    pub max_k: usize,
    pub tol: f64,
    pub vertex_cap: usize,
    /// Sequence pairs sampled per map in the dilation checks.
    pub pairs_per_map: usize,
    pub mutation: Option<Mutation>,
    /// Run only these properties; empty means all.
    pub only: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            instances: None,
            counts: BTreeMap::new(),
            max_points: 10,
            max_seq_len: 6,
            max_k: 4,
            tol: DEFAULT_TOL,
            vertex_cap: VERTEX_CAP,
            pairs_per_map: 50,
            mutation: None,
            only: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if self.max_points < 2 {
            return bad(format!("max_points must be at least 2, got {}", self.max_points));
        }
        if self.vertex_cap > VERTEX_CAP {
            return bad(format!("vertex_cap may not exceed {VERTEX_CAP}, got {}", self.vertex_cap));
        }
        // full unit-ball enumeration runs over every non-base point
        if self.max_points - 1 > self.vertex_cap {
            return bad(format!(
                "max_points {} needs a vertex cap of at least {}",
                self.max_points,
                self.max_points - 1
            ));
        }
        if self.max_seq_len == 0 {
            return bad("max_seq_len must be positive".into());
        }
        if self.max_k == 0 || self.max_k > VERTEX_CAP {
            return bad(format!("max_k must lie in 1..={VERTEX_CAP}, got {}", self.max_k));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return bad(format!("tol must be a non-negative number, got {}", self.tol));
        }
        for id in self.only.iter().chain(self.counts.keys()) {
            if property(id).is_none() {
                return bad(format!("unknown property `{id}`"));
            }
        }
        Ok(())
    }

    pub fn count(&self, p: &PropertyInfo) -> usize {
        self.counts
            .get(p.id)
            .copied()
            .or(self.instances)
            .unwrap_or(p.default_instances)
    }

    fn selected(&self, id: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|o| o == id)
    }
}

pub struct PropertyInfo {
    pub id: &'static str,
    pub claim: &'static str,
    pub default_instances: usize,
}

macro_rules! props {
    ($(($id:literal, $n:literal, $claim:literal)),* $(,)?) => {
        pub const PROPERTIES: &[PropertyInfo] = &[$(PropertyInfo { id: $id, claim: $claim, default_instances: $n }),*];
    };
}

props![
    ("metric.induced-valid", 100, "distances induced by a norm pass validation"),
    ("metric.ball-idempotent", 100, "restricting to the unit ball twice changes nothing"),
    ("moduli.omega-monotone", 100, "omega and omega_at are non-decreasing in t"),
    ("moduli.omega-dominates", 100, "omega(t) >= omega_at(x0, t)"),
    ("moduli.sup-ratio", 200, "sup_t omega_at(x0, t)/t equals lip_at(x0) exactly"),
    ("moduli.lip-at-bounded", 100, "lip_at(x0) <= lip_const for every x0"),
    ("moduli.bounded-identity", 100, "max_x norm_lx(f, x) = max(lip_const, sup norm)"),
    ("transfer.phi-isometry", 200, "norm_lx(phi(x, h), x) equals the sup norm of h"),
    ("transfer.phi-roundtrip", 200, "phi_inv and phi are mutually inverse"),
    ("transfer.phi-linear", 100, "phi is linear"),
    ("transfer.closed-form", 100, "composed transfer matches its explicit formula"),
    ("transfer.vanishing", 100, "fixed points of the transfer vanish off the equidistant set"),
    ("extbound.de-metric", 200, "d_e is a metric on base-preserving maps"),
    ("extbound.norm-laws", 100, "e_constant is absolutely homogeneous and subadditive"),
    ("extbound.e-below-lip", 100, "e_constant <= lip_const for base-preserving maps"),
    ("extbound.identity-one", 100, "the identity has e_constant 1"),
    ("extbound.gamma-isometry", 100, "gamma preserves e_constant and eta undoes it"),
    ("dual.evaluation-norm", 100, "the evaluation functional at x has norm d(x, 0)"),
    ("dual.evaluation-separation", 100, "dual distance dominates d and matches the vertex oracle"),
    ("dual.unit-vector", 100, "z -> d(z, 0) has e-norm 1"),
    ("dual.adjoint-norm", 200, "adjoint norm: closed form = vertex oracle = e_constant"),
    ("dual.adjoint-functorial", 200, "adjoint(S o T) = adjoint(T) adjoint(S)"),
    ("dual.adjoint-linear", 100, "the adjoint matrix acts as f -> f o T, linearly"),
    ("dual.second-adjoint", 100, "the second adjoint sends evaluations to evaluations"),
    ("dual.lambda-isometry", 100, "e-norm of T equals the operator norm of its pairing"),
    ("dual.p-continuity", 100, "every coordinate pairing is total"),
    ("sequences.dp-metric", 100, "d_p is symmetric and satisfies the triangle inequality"),
    ("sequences.dp-monotone", 100, "d_p is non-increasing in p; d_inf has a closed form"),
    ("sequences.tx-isometry", 100, "operator norm of T_s - T_t equals d_p(s, t)"),
    ("sequences.dilation-sandwich", 100, "e(T) <= sampled d_e ratio <= Lip estimate <= e(T)"),
    ("sequences.dilation-injective", 100, "distinct maps dilate differently on some singleton"),
    ("sequences.de-lower-bound", 100, "d_e(T, S) <= sampled d_e of the dilations"),
];

pub fn property(id: &str) -> Option<(usize, &'static PropertyInfo)> {
    PROPERTIES.iter().enumerate().find(|(_, p)| p.id == id)
}

fn phi_under(m: Option<Mutation>, x: usize, h: &VectorMap) -> Result<VectorMap> {
    match m {
        None => phi(x, h),
        Some(Mutation::CorruptedPhi) => {
            let hx = h.value(x).to_vec();
            let values = h
                .values()
                .iter()
                .map(|v| v.iter().zip(&hx).map(|(a, b)| a + b).collect())
                .collect();
            h.with_values(values)
        }
    }
}

struct Ctx<'a> {
    id: &'static str,
    cfg: &'a SuiteConfig,
    rng: ChaCha8Rng,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    fn name(&self, claim: &str) -> String {
        if claim.is_empty() {
            self.id.to_string()
        } else {
            format!("{}/{}", self.id, claim)
        }
    }

    fn approx(&mut self, claim: &str, lhs: f64, rhs: f64, w: serde_json::Value) {
        let c = Check::approx(self.name(claim), lhs, rhs, self.cfg.tol, w);
        self.checks.push(c);
    }

    fn exact(&mut self, claim: &str, lhs: f64, rhs: f64, w: serde_json::Value) {
        let c = Check::exact(self.name(claim), lhs, rhs, w);
        self.checks.push(c);
    }

    fn at_most(&mut self, claim: &str, lhs: f64, rhs: f64, w: serde_json::Value) {
        let c = Check::at_most(self.name(claim), lhs, rhs, self.cfg.tol, w);
        self.checks.push(c);
    }

    fn holds(&mut self, claim: &str, ok: bool, w: serde_json::Value) {
        let c = Check::holds(self.name(claim), ok, w);
        self.checks.push(c);
    }

    fn space(&mut self) -> Arc<PointedMetricSpace> {
        gen::random_space(&mut self.rng, self.cfg.max_points)
    }

    fn k(&mut self) -> usize {
        self.rng.random_range(1..=self.cfg.max_k)
    }

    fn point(&mut self, m: &PointedMetricSpace) -> usize {
        self.rng.random_range(0..m.len())
    }

    fn non_base(&mut self, m: &PointedMetricSpace) -> usize {
        self.rng.random_range(1..m.len())
    }

    fn vector_map(&mut self, m: &Arc<PointedMetricSpace>, base_zero: bool) -> VectorMap {
        let k = self.k();
        let norm = gen::random_norm(&mut self.rng);
        gen::random_vector_map(&mut self.rng, m, k, norm, base_zero)
    }

    fn point_map(&mut self, m: &Arc<PointedMetricSpace>, n: &Arc<PointedMetricSpace>) -> PointMap {
        gen::random_point_map(&mut self.rng, m, n)
    }

    fn sequence(&mut self, m: &Arc<PointedMetricSpace>) -> SequencePoint {
        gen::random_sequence(&mut self.rng, m, self.cfg.max_seq_len)
    }

    fn pnorm(&mut self) -> PNorm {
        [PNorm::Finite(1.0), PNorm::Finite(1.5), PNorm::Finite(2.0), PNorm::Finite(3.0), PNorm::Infinity]
            [self.rng.random_range(0..5)]
    }
}

fn seq_json(s: &SequencePoint) -> serde_json::Value {
    json!(s.labels())
}

fn matrix_json(m: &PointedMetricSpace) -> serde_json::Value {
    json!(m.matrix())
}

type Body = fn(&mut Ctx, usize) -> Result<()>;

fn body(id: &str) -> Body {
    match id {
        "metric.induced-valid" => induced_valid,
        "metric.ball-idempotent" => ball_idempotent,
        "moduli.omega-monotone" => omega_monotone,
        "moduli.omega-dominates" => omega_dominates,
        "moduli.sup-ratio" => sup_ratio,
        "moduli.lip-at-bounded" => lip_at_bounded,
        "moduli.bounded-identity" => bounded_identity,
        "transfer.phi-isometry" => phi_isometry,
        "transfer.phi-roundtrip" => phi_roundtrip,
        "transfer.phi-linear" => phi_linear,
        "transfer.closed-form" => closed_form,
        "transfer.vanishing" => vanishing,
        "extbound.de-metric" => de_metric,
        "extbound.norm-laws" => norm_laws,
        "extbound.e-below-lip" => e_below_lip,
        "extbound.identity-one" => identity_one,
        "extbound.gamma-isometry" => gamma_isometry,
        "dual.evaluation-norm" => evaluation_norm,
        "dual.evaluation-separation" => evaluation_separation,
        "dual.unit-vector" => unit_vector,
        "dual.adjoint-norm" => adjoint_norm_prop,
        "dual.adjoint-functorial" => adjoint_functorial,
        "dual.adjoint-linear" => adjoint_linear,
        "dual.second-adjoint" => second_adjoint,
        "dual.lambda-isometry" => lambda_isometry,
        "dual.p-continuity" => p_continuity,
        "sequences.dp-metric" => dp_metric,
        "sequences.dp-monotone" => dp_monotone,
        "sequences.tx-isometry" => tx_isometry,
        "sequences.dilation-sandwich" => dilation_sandwich,
        "sequences.dilation-injective" => dilation_injective,
        "sequences.de-lower-bound" => de_lower_bound,
        other => unreachable!("no body for property {other}"),
    }
}

fn induced_valid(c: &mut Ctx, i: usize) -> Result<()> {
    let n = c.rng.random_range(2..=c.cfg.max_points);
    let dim = c.rng.random_range(1..=3);
    let norm = gen::random_norm(&mut c.rng);
    let coords = gen::cloud_coords(&mut c.rng, n, dim, norm);
    let ok = induced_space(&coords).map(|m| m.validate().is_valid());
    c.holds(
        "norm",
        matches!(ok, Ok(true)),
        json!({"instance": i, "norm": norm, "coords": coords.coords()}),
    );
    let m = gen::abstract_space(&mut c.rng, n);
    c.holds(
        "shortest-path",
        m.validate().is_valid(),
        json!({"instance": i, "matrix": matrix_json(&m)}),
    );
    Ok(())
}

fn ball_idempotent(c: &mut Ctx, i: usize) -> Result<()> {
    let n = c.rng.random_range(2..=c.cfg.max_points);
    let dim = c.rng.random_range(1..=3);
    let norm = gen::random_norm(&mut c.rng);
    let sample = gen::retraction_closed_sample(&mut c.rng, n, dim, norm)?;
    let once = restrict_to_ball(&sample);
    let twice = restrict_to_ball(&once.ball);
    c.holds(
        "",
        twice.ball == once.ball,
        json!({"instance": i, "norm": norm, "coords": sample.coords()}),
    );
    Ok(())
}

fn omega_monotone(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let f = c.vector_map(&m, false);
    let diam = m.matrix().iter().flatten().copied().fold(0.0, f64::max);
    let a = c.rng.random_range(0.0..1.2 * diam).max(f64::MIN_POSITIVE);
    let b = c.rng.random_range(0.0..1.2 * diam).max(f64::MIN_POSITIVE);
    let (t1, t2) = if a <= b { (a, b) } else { (b, a) };
    let x0 = c.point(&m);
    let (w1, w2) = (omega(&f, t1)?, omega(&f, t2)?);
    c.at_most("omega", w1.value, w2.value, json!({"instance": i, "t1": t1, "t2": t2, "pair": w1.witness}));
    let (v1, v2) = (omega_at(&f, x0, t1)?, omega_at(&f, x0, t2)?);
    c.at_most(
        "omega-at",
        v1.value,
        v2.value,
        json!({"instance": i, "x0": x0, "t1": t1, "t2": t2, "pair": v1.witness}),
    );
    Ok(())
}

fn omega_dominates(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let f = c.vector_map(&m, false);
    let x0 = c.point(&m);
    let x = c.point(&m);
    let t = if x == x0 { c.rng.random_range(0.01..2.0) } else { m.d(x, x0) };
    let local = omega_at(&f, x0, t)?;
    c.at_most("", local.value, omega(&f, t)?.value, json!({"instance": i, "x0": x0, "t": t, "pair": local.witness}));
    Ok(())
}

fn sup_ratio(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let x0 = c.point(&m);
    let w = |r: Option<usize>| json!({"instance": i, "x0": x0, "witness": r});
    if c.rng.random_bool(0.5) {
        let f = c.vector_map(&m, false);
        let (s, l) = (sup_omega_ratio(&f, x0)?, lip_at(&f, x0)?);
        c.exact("vector", s.value, l.value, w(l.witness));
    } else {
        let n = c.space();
        let t = c.point_map(&m, &n);
        let (s, l) = (sup_omega_ratio(&t, x0)?, lip_at(&t, x0)?);
        c.exact("point", s.value, l.value, w(l.witness));
    }
    Ok(())
}

fn lip_at_bounded(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let f = c.vector_map(&m, false);
    let global = lip_const(&f);
    let x0 = c.point(&m);
    let local = lip_at(&f, x0)?;
    c.at_most("", local.value, global.value, json!({"instance": i, "x0": x0, "witness": local.witness}));
    Ok(())
}

fn bounded_identity(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let f = c.vector_map(&m, false);
    let mut best = (0.0f64, 0usize);
    for x in 0..m.len() {
        let v = norm_lx(&f, x)?;
        if v > best.0 {
            best = (v, x);
        }
    }
    let rhs = lip_const(&f).value.max(f.sup_norm());
    c.approx("", best.0, rhs, json!({"instance": i, "x": best.1}));
    Ok(())
}

fn phi_isometry(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let h = c.vector_map(&m, false);
    let x = c.point(&m);
    let g = phi_under(c.cfg.mutation, x, &h)?;
    c.approx(
        "",
        norm_lx(&g, x)?,
        h.sup_norm(),
        json!({"instance": i, "x": x, "h": h.values(), "matrix": matrix_json(&m)}),
    );
    Ok(())
}

fn phi_roundtrip(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let h = c.vector_map(&m, false);
    let x = c.point(&m);
    let back = phi_inv(x, &phi_under(c.cfg.mutation, x, &h)?)?;
    c.approx("inverse-after", back.max_abs_diff(&h), 0.0, json!({"instance": i, "x": x, "h": h.values()}));
    let g = c.vector_map(&m, false);
    let again = phi_under(c.cfg.mutation, x, &phi_inv(x, &g)?)?;
    c.approx("inverse-before", again.max_abs_diff(&g), 0.0, json!({"instance": i, "x": x, "g": g.values()}));
    Ok(())
}

fn phi_linear(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let h1 = c.vector_map(&m, false);
    let h2 = gen::random_vector_map(&mut c.rng, &m, h1.k(), h1.norm_tag(), false);
    let (a, b) = (c.rng.random_range(-3.0..3.0), c.rng.random_range(-3.0..3.0));
    let x = c.point(&m);
    let mu = c.cfg.mutation;
    let lhs = phi_under(mu, x, &h1.combine(a, &h2, b)?)?;
    let rhs = phi_under(mu, x, &h1)?.combine(a, &phi_under(mu, x, &h2)?, b)?;
    c.approx("", lhs.max_abs_diff(&rhs), 0.0, json!({"instance": i, "x": x, "alpha": a, "beta": b}));
    Ok(())
}

fn closed_form(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let f = c.vector_map(&m, false);
    let x1 = c.point(&m);
    let x2 = (x1 + c.rng.random_range(1..m.len())) % m.len();
    let t = transfer_compose(x1, x2, &f)?;
    c.approx("", t.discrepancy(), 0.0, json!({"instance": i, "x1": x1, "x2": x2, "f": f.values()}));
    Ok(())
}

fn vanishing(c: &mut Ctx, i: usize) -> Result<()> {
    let bisector = c.rng.random_range(1..=3);
    let generic = c.rng.random_range(1..=4);
    let (sample, x1, x2) = gen::bisector_sample(&mut c.rng, bisector, generic);
    let m = Arc::new(induced_space(&sample)?);
    let k = c.k();
    let norm = gen::random_norm(&mut c.rng);
    // supported on the origin and the bisector points, which are equidistant
    let support = |x: usize| x == 0 || (3..3 + bisector).contains(&x);
    let values: Vec<Vec<f64>> = (0..m.len())
        .map(|x| (0..k).map(|_| if support(x) { c.rng.random_range(-5.0..5.0) } else { 0.0 }).collect())
        .collect();
    let fixed = VectorMap::new(m.clone(), k, norm, values)?;
    let r = vanishing_check(&sample, &fixed, x1, x2, c.cfg.tol)?;
    c.holds(
        "fixed-point",
        r.is_fixed_point && r.passes(),
        json!({"instance": i, "coords": sample.coords(), "f": fixed.values(), "violations": r.violations}),
    );
    let generic_f = gen::random_vector_map(&mut c.rng, &m, k, norm, false);
    let r = vanishing_check(&sample, &generic_f, x1, x2, c.cfg.tol)?;
    c.holds(
        "implication",
        r.passes(),
        json!({"instance": i, "coords": sample.coords(), "f": generic_f.values(), "violations": r.violations}),
    );
    Ok(())
}

fn de_metric(c: &mut Ctx, i: usize) -> Result<()> {
    let (m, n) = (c.space(), c.space());
    let t = c.point_map(&m, &n);
    let s = if c.rng.random_bool(0.2) { t.clone() } else { c.point_map(&m, &n) };
    let u = c.point_map(&m, &n);
    let tol = c.cfg.tol;
    let w = json!({"instance": i, "t": t.table(), "s": s.table(), "u": u.table()});
    let (ts, st) = (de_distance(&t, &s, tol)?, de_distance(&s, &t, tol)?);
    c.exact("symmetry", ts.value, st.value, w.clone());
    let equal = t.table() == s.table();
    c.holds("indiscernibles", (ts.value == 0.0) == equal, json!({"instance": i, "d": ts.value, "equal": equal}));
    let (tu, su) = (de_distance(&t, &u, tol)?, de_distance(&s, &u, tol)?);
    c.at_most("triangle", tu.value, ts.value + su.value, w);
    Ok(())
}

fn norm_laws(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let f = c.vector_map(&m, true);
    let g = gen::random_vector_map(&mut c.rng, &m, f.k(), f.norm_tag(), true);
    let a: f64 = c.rng.random_range(-3.0..3.0);
    let tol = c.cfg.tol;
    let ef = e_constant(&f, tol)?.value;
    let eg = e_constant(&g, tol)?.value;
    c.approx("homogeneous", e_constant(&f.scale(a), tol)?.value, a.abs() * ef, json!({"instance": i, "alpha": a}));
    let sum = f.combine(1.0, &g, 1.0)?;
    c.at_most("subadditive", e_constant(&sum, tol)?.value, ef + eg, json!({"instance": i}));
    Ok(())
}

fn e_below_lip(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let tol = c.cfg.tol;
    let f = c.vector_map(&m, true);
    let e = e_constant(&f, tol)?;
    c.at_most("vector", e.value, lip_const(&f).value, json!({"instance": i, "witness": e.witness}));
    let n = c.space();
    let t = c.point_map(&m, &n);
    let e = e_constant(&t, tol)?;
    c.at_most("point", e.value, lip_const(&t).value, json!({"instance": i, "table": t.table()}));
    Ok(())
}

fn identity_one(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let e = e_constant(&PointMap::identity(m.clone()), c.cfg.tol)?;
    c.exact("", e.value, 1.0, json!({"instance": i, "witness": e.witness}));
    Ok(())
}

fn gamma_isometry(c: &mut Ctx, i: usize) -> Result<()> {
    let n = c.rng.random_range(2..=c.cfg.max_points);
    let dim = c.rng.random_range(1..=3);
    let norm = gen::random_norm(&mut c.rng);
    let sample = gen::retraction_closed_sample(&mut c.rng, n, dim, norm)?;
    let emb = BallEmbedding::new(sample, c.cfg.tol)?;
    let f = c.vector_map(&emb.ball_space().clone(), true);
    let g = emb.gamma(&f)?;
    let tol = c.cfg.tol;
    let w = json!({"instance": i, "norm": norm, "coords": emb.sample().coords(), "f": f.values()});
    c.approx("e-constant", e_constant(&g, tol)?.value, e_constant(&f, tol)?.value, w.clone());
    c.holds("eta-gamma", emb.eta(&g)?.values() == f.values(), w);
    Ok(())
}

fn evaluation_norm(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let x = c.non_base(&m);
    let cap = c.cfg.vertex_cap;
    c.exact("closed-form", dual_distance(&m, x, 0)?, m.norm(x), json!({"instance": i, "x": x}));
    c.approx("oracle", dual_distance_oracle(&m, x, 0, cap)?, m.norm(x), json!({"instance": i, "x": x}));
    Ok(())
}

fn evaluation_separation(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let cap = c.cfg.vertex_cap;
    // worst pair for each claim
    let mut gap = (f64::INFINITY, 0.0, 0.0, (0, 0));
    let mut drift = (0.0f64, 0.0, 0.0, (0, 0));
    for x in 0..m.len() {
        for y in (x + 1)..m.len() {
            let dd = dual_distance(&m, x, y)?;
            if dd - m.d(x, y) < gap.0 {
                gap = (dd - m.d(x, y), m.d(x, y), dd, (x, y));
            }
            let or = dual_distance_oracle(&m, x, y, cap)?;
            if (or - dd).abs() >= drift.0 {
                drift = ((or - dd).abs(), dd, or, (x, y));
            }
        }
    }
    c.at_most("dominates", gap.1, gap.2, json!({"instance": i, "pair": gap.3}));
    c.approx("oracle", drift.1, drift.2, json!({"instance": i, "pair": drift.3}));
    Ok(())
}

fn unit_vector(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let f = Functional::distance_to_base(m.clone());
    c.exact("", f.e_norm(), 1.0, json!({"instance": i, "points": m.len()}));
    Ok(())
}

fn adjoint_norm_prop(c: &mut Ctx, i: usize) -> Result<()> {
    let (m, n) = (c.space(), c.space());
    let t = c.point_map(&m, &n);
    let a = adjoint_norm(&t, c.cfg.vertex_cap)?;
    let e = e_constant(&t, c.cfg.tol)?;
    let w = json!({"instance": i, "table": t.table(), "e_witness": e.witness});
    match a.oracle {
        Some(o) => c.approx("oracle", a.closed_form, o, w.clone()),
        None => c.holds("oracle", false, json!({"instance": i, "reason": "vertex cap exceeded"})),
    }
    c.approx("e-constant", a.closed_form, e.value, w);
    Ok(())
}

fn adjoint_functorial(c: &mut Ctx, i: usize) -> Result<()> {
    let (m, n, p) = (c.space(), c.space(), c.space());
    let t = c.point_map(&m, &n);
    let s = c.point_map(&n, &p);
    let lhs = adjoint(&t.then(&s)?)?;
    let rhs = adjoint(&t)?.mul(&adjoint(&s)?)?;
    c.holds("", lhs == rhs, json!({"instance": i, "t": t.table(), "s": s.table()}));
    Ok(())
}

fn random_functional(c: &mut Ctx, n: &Arc<PointedMetricSpace>) -> Result<Functional> {
    let v = n.non_base().map(|z| c.rng.random_range(-1.0..1.0) * n.norm(z)).collect();
    Functional::new(n.clone(), v)
}

fn adjoint_linear(c: &mut Ctx, i: usize) -> Result<()> {
    let (m, n) = (c.space(), c.space());
    let t = c.point_map(&m, &n);
    let a = adjoint(&t)?;
    let f = random_functional(c, &n)?;
    let g = random_functional(c, &n)?;
    let (al, be) = (c.rng.random_range(-3.0..3.0), c.rng.random_range(-3.0..3.0));
    let mix: Vec<f64> = f.coords().iter().zip(g.coords()).map(|(x, y)| al * x + be * y).collect();
    let lhs = a.apply(&mix);
    let (af, ag) = (a.apply(f.coords()), a.apply(g.coords()));
    let worst = lhs
        .iter()
        .zip(af.iter().zip(&ag))
        .map(|(l, (x, y))| (l - (al * x + be * y)).abs())
        .fold(0.0, f64::max);
    c.approx("linear", worst, 0.0, json!({"instance": i, "table": t.table(), "alpha": al, "beta": be}));
    let compose = m
        .non_base()
        .map(|x| (af[x - 1] - f.eval(t.apply(x))).abs())
        .fold(0.0, f64::max);
    c.exact("composition", compose, 0.0, json!({"instance": i, "table": t.table()}));
    Ok(())
}

fn second_adjoint(c: &mut Ctx, i: usize) -> Result<()> {
    let (m, n) = (c.space(), c.space());
    let t = c.point_map(&m, &n);
    let f = random_functional(c, &n)?;
    let x = c.point(&m);
    let (lhs, rhs) = second_adjoint_eval(&t, x, &f)?;
    c.exact("", lhs, rhs, json!({"instance": i, "table": t.table(), "x": x}));
    Ok(())
}

fn lambda_isometry(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let q = [NormTag::One, NormTag::Two, NormTag::Sup][i % 3];
    let k = c.k();
    let t = gen::random_vector_map(&mut c.rng, &m, k, q.dual(), true);
    let l = lambda_norm(&t, q, c.cfg.tol)?;
    c.approx(q.as_str(), l.t_e_norm, l.lambda_opnorm, json!({"instance": i, "q": q, "values": t.values()}));
    Ok(())
}

fn p_continuity(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let t = c.vector_map(&m, true);
    c.holds("", is_p_continuous(&t), json!({"instance": i}));
    Ok(())
}

fn dp_metric(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let (s, t, u) = (c.sequence(&m), c.sequence(&m), c.sequence(&m));
    let p = c.pnorm();
    let cap = c.cfg.vertex_cap;
    let w = json!({"instance": i, "p": p, "s": seq_json(&s), "t": seq_json(&t), "u": seq_json(&u)});
    let st = dp_distance(p, &s, &t, cap)?.value;
    c.exact("symmetry", st, dp_distance(p, &t, &s, cap)?.value, w.clone());
    let (su, tu) = (dp_distance(p, &s, &u, cap)?.value, dp_distance(p, &t, &u, cap)?.value);
    c.at_most("triangle", su, st + tu, w);
    Ok(())
}

fn dp_monotone(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let (s, t) = (c.sequence(&m), c.sequence(&m));
    let cap = c.cfg.vertex_cap;
    let w = json!({"instance": i, "s": seq_json(&s), "t": seq_json(&t)});
    let ps = [PNorm::Finite(1.0), PNorm::Finite(1.5), PNorm::Finite(2.0), PNorm::Finite(3.0), PNorm::Infinity];
    let mut vals = Vec::with_capacity(ps.len());
    for p in ps {
        vals.push(dp_distance(p, &s, &t, cap)?);
    }
    c.at_most("inf-below-2", vals[4].value, vals[2].value, w.clone());
    c.at_most("2-below-1", vals[2].value, vals[0].value, w.clone());
    let worst = vals.windows(2).map(|v| v[1].value - v[0].value).fold(f64::NEG_INFINITY, f64::max);
    c.at_most("non-increasing", worst, 0.0, w.clone());
    let closed = vals[4].closed_form.unwrap_or(f64::NAN);
    c.approx("inf-closed-form", closed, vals[4].value, w);
    Ok(())
}

fn tx_isometry(c: &mut Ctx, i: usize) -> Result<()> {
    let m = c.space();
    let (s, t) = (c.sequence(&m), c.sequence(&m));
    let p = c.pnorm();
    let cap = c.cfg.vertex_cap;
    let w = json!({"instance": i, "p": p, "s": seq_json(&s), "t": seq_json(&t)});
    c.approx("difference", tx_operator_norm(p, &s, &t, cap)?, dp_distance(p, &s, &t, cap)?.value, w.clone());
    let zero = SequencePoint::zero(m.clone());
    c.approx("single", tx_operator_norm(p, &s, &zero, cap)?, dp_norm(p, &s, cap)?.value, w);
    Ok(())
}

fn dilation_sandwich(c: &mut Ctx, i: usize) -> Result<()> {
    let (m, n) = (c.space(), c.space());
    let t = c.point_map(&m, &n);
    let pairs: Vec<(SequencePoint, SequencePoint)> =
        (0..c.cfg.pairs_per_map).map(|_| (c.sequence(&m), c.sequence(&m))).collect();
    for p in [PNorm::Finite(1.0), PNorm::Finite(2.0), PNorm::Infinity] {
        let r = dilation_certificates(p, &t, &pairs, c.cfg.vertex_cap, c.cfg.tol)?;
        let base = json!({"instance": i, "p": p, "table": t.table()});
        let worst = r
            .pairs
            .iter()
            .max_by(|a, b| (a.dilated - a.bound).total_cmp(&(b.dilated - b.bound)));
        if let Some(pc) = worst {
            let w = json!({"instance": i, "p": p, "table": t.table(), "s": seq_json(&pc.s), "t": seq_json(&pc.t)});
            c.at_most("pair-bound", pc.dilated, pc.bound, w);
        }
        c.at_most("lip-below-e", r.lip_estimate, r.e_constant, base.clone());
        c.approx("singleton-max", r.singleton_max, r.e_constant, base.clone());
        c.holds(
            "chain",
            r.chain_holds,
            json!({"instance": i, "p": p, "e": r.e_constant, "de_ratio": r.de_ratio_max, "lip": r.lip_estimate}),
        );
    }
    Ok(())
}

fn distinct_map(c: &mut Ctx, t: &PointMap) -> Result<PointMap> {
    let mut table = c.point_map(t.src_space(), t.dst_space()).table().to_vec();
    if table == t.table() {
        let x = c.non_base(t.src_space());
        table[x] = (table[x] + c.rng.random_range(1..t.dst_space().len())) % t.dst_space().len();
    }
    PointMap::new(t.src_space().clone(), t.dst_space().clone(), table)
}

fn dilation_injective(c: &mut Ctx, i: usize) -> Result<()> {
    let (m, n) = (c.space(), c.space());
    let t = c.point_map(&m, &n);
    let s = distinct_map(c, &t)?;
    let mut separating = None;
    for x in m.non_base() {
        let sx = SequencePoint::singleton(m.clone(), x)?;
        if dilate(&t, &sx)? != dilate(&s, &sx)? {
            separating = Some(x);
            break;
        }
    }
    c.holds(
        "",
        separating.is_some(),
        json!({"instance": i, "t": t.table(), "s": s.table(), "separating": separating}),
    );
    Ok(())
}

fn de_lower_bound(c: &mut Ctx, i: usize) -> Result<()> {
    let (m, n) = (c.space(), c.space());
    let t = c.point_map(&m, &n);
    let s = c.point_map(&m, &n);
    let p = c.pnorm();
    let cap = c.cfg.vertex_cap;
    let mut sampled = 0.0f64;
    for x in m.non_base() {
        let sx = SequencePoint::singleton(m.clone(), x)?;
        let num = dp_distance(p, &dilate(&t, &sx)?, &dilate(&s, &sx)?, cap)?.value;
        sampled = sampled.max(num / dp_norm(p, &sx, cap)?.value);
    }
    let de = de_distance(&t, &s, c.cfg.tol)?;
    c.at_most("", de.value, sampled, json!({"instance": i, "p": p, "t": t.table(), "s": s.table(), "witness": de.witness}));
    Ok(())
}

/// Runs `instances` instances of one property and returns its checks.
/// Errors raised inside a property become failing checks.
pub fn run_property(id: &str, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (index, info) = property(id).ok_or_else(|| Error::Invalid(format!("unknown property `{id}`")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut ctx = Ctx {
        id: info.id,
        cfg,
        rng,
        checks: Vec::new(),
    };
    let f = body(info.id);
    for i in 0..cfg.count(info) {
        if let Err(e) = f(&mut ctx, i) {
            let name = ctx.name("error");
            ctx.checks.push(Check::holds(name, false, json!({"instance": i, "error": e.to_string()})));
        }
    }
    Ok(ctx.checks)
}

/// Runs every selected property in index order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<AnalysisReport> {
    cfg.validate()?;
    let mut report = AnalysisReport::new(vec!["suite".into()]);
    let cfg_json = serde_json::to_vec(cfg)?;
    report.set_inputs([cfg_json.as_slice()]);
    for info in PROPERTIES.iter().filter(|p| cfg.selected(p.id)) {
        let checks = run_property(info.id, cfg)?;
        let failed = checks.iter().filter(|c| !c.passed()).count();
        report.push(ResultEntry::new(
            info.id,
            json!({"claim": info.claim, "instances": cfg.count(info), "checks": checks.len(), "failed": failed}),
            Provenance::Oracle,
        ));
        report.extend_checks(checks);
    }
    if let Some(m) = cfg.mutation {
        report.notes.push(format!("mutation {} is active; failures are expected", json!(m)));
    }
    report.finish();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_property_has_a_body() {
        for p in PROPERTIES {
            let _ = body(p.id);
        }
    }

    #[test]
    fn small_run_passes() {
        let cfg = SuiteConfig {
            instances: Some(5),
            ..Default::default()
        };
        let r = run_suite(&cfg).unwrap();
        let failed: Vec<_> = r.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn mutation_is_caught() {
        let cfg = SuiteConfig {
            instances: Some(20),
            mutation: Some(Mutation::CorruptedPhi),
            only: vec!["transfer.phi-isometry".into(), "transfer.phi-roundtrip".into()],
            ..Default::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(r.failures().count() > 10);
    }

    #[test]
    fn config_bounds() {
        let cfg = SuiteConfig {
            max_points: 30,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = SuiteConfig {
            only: vec!["nope".into()],
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
