// SPDX-License-Identifier: Apache-2.0

//! Finitely supported sequences in `ℓ_p^e(M)`, their distances, and the
//! dilation `T̂(⟨x_n⟩) = ⟨T(x_n)⟩` of a base-preserving map.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::dual::{max_over_box_vertices, Functional};
use crate::error::{Error, Result};
use crate::extbound::e_constant;
use crate::metric::{same_space, PointMap, PointedMetricSpace};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(PNorm::Infinity)
        } else if p >= 1.0 {
            Ok(PNorm::Finite(p))
        } else {
            Err(Error::Invalid(format!("p must be at least 1, got {p}")))
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            PNorm::Finite(p) => p,
            PNorm::Infinity => f64::INFINITY,
        }
    }

    /// Accumulates `|x|^p` (or the max for `p = ∞`).
    fn accumulate(self, acc: f64, x: f64) -> f64 {
        let a = x.abs();
        match self {
            PNorm::Infinity => acc.max(a),
            PNorm::Finite(p) if p == 1.0 => acc + a,
            PNorm::Finite(p) if p == 2.0 => acc + a * a,
            PNorm::Finite(p) => acc + a.powf(p),
        }
    }

    fn finish(self, acc: f64) -> f64 {
        match self {
            PNorm::Infinity => acc,
            PNorm::Finite(p) if p == 1.0 => acc,
            PNorm::Finite(p) if p == 2.0 => acc.sqrt(),
            PNorm::Finite(p) => acc.powf(p.recip()),
        }
    }

    pub fn norm(self, xs: impl IntoIterator<Item = f64>) -> f64 {
        self.finish(xs.into_iter().fold(0.0, |acc, x| self.accumulate(acc, x)))
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::Finite(p) => write!(f, "{p}"),
            PNorm::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" | "∞" => Ok(PNorm::Infinity),
            _ => {
                let p: f64 = s
                    .parse()
                    .map_err(|_| Error::Invalid(format!("cannot parse p = `{s}`")))?;
                PNorm::new(p)
            }
        }
    }
}

impl Serialize for PNorm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PNorm::Finite(p) => s.serialize_f64(*p),
            PNorm::Infinity => s.serialize_str("inf"),
        }
    }
}

/// A finitely supported sequence of points; it continues with the base
/// point forever. Trailing base points are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct SequencePoint {
    space: Arc<PointedMetricSpace>,
    idx: Vec<usize>,
}

impl SequencePoint {
    pub fn new(space: Arc<PointedMetricSpace>, mut idx: Vec<usize>) -> Result<Self> {
        for &i in &idx {
            space.check_index(i)?;
        }
        while idx.last() == Some(&0) {
            idx.pop();
        }
        Ok(SequencePoint { space, idx })
    }

    pub fn from_labels<S: AsRef<str>>(space: Arc<PointedMetricSpace>, labels: &[S]) -> Result<Self> {
        let idx = labels
            .iter()
            .map(|l| space.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, idx)
    }

    /// The base-constant sequence.
    pub fn zero(space: Arc<PointedMetricSpace>) -> Self {
        SequencePoint { space, idx: Vec::new() }
    }

    pub fn singleton(space: Arc<PointedMetricSpace>, x: usize) -> Result<Self> {
        Self::new(space, vec![x])
    }

    pub fn space(&self) -> &Arc<PointedMetricSpace> {
        &self.space
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    #[inline]
    pub fn at(&self, n: usize) -> usize {
        self.idx.get(n).copied().unwrap_or(0)
    }

    pub fn labels(&self) -> Vec<String> {
        self.idx.iter().map(|&i| self.space.label(i).to_string()).collect()
    }
}

impl Serialize for SequencePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DpValue {
    pub value: f64,
    /// A unit-ball vertex attaining the supremum.
    pub witness: Functional,
    /// For `p = ∞`: `max_n (d(s_n, 0) + d(t_n, 0))` over positions where the
    /// sequences differ.
    pub closed_form: Option<f64>,
}

fn padded_terms(s: &SequencePoint, t: &SequencePoint) -> Vec<(usize, usize)> {
    let len = s.len().max(t.len());
    (0..len)
        .map(|n| (s.at(n), t.at(n)))
        .filter(|(a, b)| a != b)
        .collect()
}

/// `d_p(s, t) = sup_{f ∈ M₁^e} ‖(f(s_n) − f(t_n))_n‖_p`.
///
/// The objective is convex in `f`, so the supremum is attained at a vertex
/// of the unit box. Only coordinates at points occurring in the two
/// sequences are enumerated; the witness takes `+d(z, 0)` everywhere else.
pub fn dp_distance(p: PNorm, s: &SequencePoint, t: &SequencePoint, cap: usize) -> Result<DpValue> {
    if !same_space(&s.space, &t.space) {
        return Err(Error::SpaceMismatch);
    }
    let space = &s.space;
    let terms = padded_terms(s, t);
    let free: Vec<usize> = terms
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .filter(|&z| z != 0)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let slot = |z: usize| free.binary_search(&z).ok();
    // positions into the vertex vector, None for the base point
    let local: Vec<(Option<usize>, Option<usize>)> = terms.iter().map(|&(a, b)| (slot(a), slot(b))).collect();
    let radii: Vec<f64> = free.iter().map(|&z| space.norm(z)).collect();
    let at = |v: &[f64], i: Option<usize>| i.map_or(0.0, |i| v[i]);
    let (acc, vertex) = max_over_box_vertices(&radii, cap, |v| {
        local
            .iter()
            .fold(0.0, |acc, &(a, b)| p.accumulate(acc, at(v, a) - at(v, b)))
    })?;

    let mut coords: Vec<f64> = space.non_base().map(|z| space.norm(z)).collect();
    for (i, &z) in free.iter().enumerate() {
        coords[z - 1] = vertex[i];
    }
    let closed_form = matches!(p, PNorm::Infinity).then(|| {
        terms
            .iter()
            .map(|&(a, b)| space.norm(a) + space.norm(b))
            .fold(0.0, f64::max)
    });
    Ok(DpValue {
        value: p.finish(acc),
        witness: Functional::new(space.clone(), coords)?,
        closed_form,
    })
}

/// `d_p(s, 0)`.
pub fn dp_norm(p: PNorm, s: &SequencePoint, cap: usize) -> Result<DpValue> {
    dp_distance(p, s, &SequencePoint::zero(s.space.clone()), cap)
}

/// Operator norm of `T_s − T_t: M^e → ℓ_p`, `f ↦ (f(s_n) − f(t_n))_n`.
///
/// Builds the operator's matrix and maximizes `‖A f‖_p` over every vertex
/// of the unit ball of `M^e`, independently of [`dp_distance`].
pub fn tx_operator_norm(p: PNorm, s: &SequencePoint, t: &SequencePoint, cap: usize) -> Result<f64> {
    if !same_space(&s.space, &t.space) {
        return Err(Error::SpaceMismatch);
    }
    let space = &s.space;
    let m = space.len() - 1;
    let len = s.len().max(t.len());
    let mut a = vec![vec![0.0; m]; len];
    for (n, row) in a.iter_mut().enumerate() {
        if s.at(n) != 0 {
            row[s.at(n) - 1] += 1.0;
        }
        if t.at(n) != 0 {
            row[t.at(n) - 1] -= 1.0;
        }
    }
    let radii: Vec<f64> = space.non_base().map(|z| space.norm(z)).collect();
    let (best, _) = max_over_box_vertices(&radii, cap, |f| {
        p.norm(a.iter().map(|row| row.iter().zip(f).map(|(x, y)| x * y).sum::<f64>()))
    })?;
    Ok(best)
}

/// `T̂(⟨x_n⟩) = ⟨T(x_n)⟩`.
pub fn dilate(t: &PointMap, s: &SequencePoint) -> Result<SequencePoint> {
    if !same_space(t.src_space(), &s.space) {
        return Err(Error::SpaceMismatch);
    }
    if !t.preserves_base() {
        return Err(Error::BaseNotPreserved(t.dst_space().norm(t.apply(0))));
    }
    SequencePoint::new(t.dst_space().clone(), s.idx.iter().map(|&i| t.apply(i)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCertificate {
    pub s: SequencePoint,
    pub t: SequencePoint,
    /// `d_p(T̂s, T̂t)`.
    pub dilated: f64,
    /// `d_p(s, t)`.
    pub original: f64,
    /// `d_e(T, 0)·d_p(s, t)`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilationReport {
    pub p: PNorm,
    pub e_constant: f64,
    pub pairs: Vec<PairCertificate>,
    /// `d(T(x), 0) / d(x, 0)` computed through singleton sequences, one per
    /// non-base point.
    pub singleton_ratios: Vec<f64>,
    pub singleton_max: f64,
    pub singleton_matches: bool,
    /// Largest `d_p(T̂s, 0) / d_p(s, 0)` over every sequence seen.
    pub de_ratio_max: f64,
    /// Largest `d_p(T̂s, T̂t) / d_p(s, t)` over every pair seen, including
    /// pairs with the zero sequence.
    pub lip_estimate: f64,
    /// `e ≤ de_ratio_max ≤ lip_estimate ≤ e` within tolerance.
    pub chain_holds: bool,
}

impl DilationReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|p| p.holds) && self.singleton_matches && self.chain_holds
    }
}

/// Checks `Lip(T̂) ≤ d_e(T, 0)` on the supplied pairs and
/// `d_e(T̂, 0) ≥ d_e(T, 0)` through singleton sequences.
pub fn dilation_certificates(
    p: PNorm,
    t: &PointMap,
    pairs: &[(SequencePoint, SequencePoint)],
    cap: usize,
    tol: f64,
) -> Result<DilationReport> {
    let e = e_constant(t, tol)?.value;
    let src = t.src_space();
    let zero_src = SequencePoint::zero(src.clone());
    let zero_dst = SequencePoint::zero(t.dst_space().clone());

    let mut lip_estimate = 0.0f64;
    let mut de_ratio_max = 0.0f64;
    let mut ratio = |a: &SequencePoint, b: &SequencePoint| -> Result<(f64, f64)> {
        let orig = dp_distance(p, a, b, cap)?.value;
        let dil = dp_distance(p, &dilate(t, a)?, &dilate(t, b)?, cap)?.value;
        if orig > 0.0 {
            lip_estimate = lip_estimate.max(dil / orig);
        }
        Ok((dil, orig))
    };

    let mut singleton_ratios = Vec::new();
    for x in src.non_base() {
        let sx = SequencePoint::singleton(src.clone(), x)?;
        let (dil, orig) = ratio(&sx, &zero_src)?;
        singleton_ratios.push(dil / orig);
    }
    let singleton_max = singleton_ratios.iter().copied().fold(0.0, f64::max);
    de_ratio_max = de_ratio_max.max(singleton_max);

    let mut certs = Vec::with_capacity(pairs.len());
    for (s, u) in pairs {
        let (dilated, original) = ratio(s, u)?;
        for seq in [s, u] {
            let (dn, on) = ratio(seq, &zero_src)?;
            if on > 0.0 {
                de_ratio_max = de_ratio_max.max(dn / on);
            }
        }
        let bound = e * original;
        certs.push(PairCertificate {
            s: s.clone(),
            t: u.clone(),
            dilated,
            original,
            bound,
            holds: dilated <= bound + tol,
        });
    }
    debug_assert!(dilate(t, &zero_src).map(|z| z == zero_dst).unwrap_or(false));

    let chain_holds = e <= de_ratio_max + tol && de_ratio_max <= lip_estimate + tol && lip_estimate <= e + tol;
    Ok(DilationReport {
        p,
        e_constant: e,
        pairs: certs,
        singleton_matches: (singleton_max - e).abs() <= tol,
        singleton_ratios,
        singleton_max,
        de_ratio_max,
        lip_estimate,
        chain_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::VERTEX_CAP;
    use crate::metric::DEFAULT_TOL;

    fn m3() -> Arc<PointedMetricSpace> {
        let labels = ["0", "a", "b"].iter().map(|s| s.to_string()).collect();
        Arc::new(
            PointedMetricSpace::new(
                labels,
                0,
                vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.5], vec![2.0, 1.5, 0.0]],
            )
            .unwrap(),
        )
    }

    fn seq(m: &Arc<PointedMetricSpace>, labels: &[&str]) -> SequencePoint {
        SequencePoint::from_labels(m.clone(), labels).unwrap()
    }

    #[test]
    fn dp_examples() {
        let m = m3();
        let one = PNorm::Finite(1.0);
        let d = dp_distance(one, &seq(&m, &["a"]), &seq(&m, &["b"]), VERTEX_CAP).unwrap();
        assert_eq!(d.value, 3.0);
        assert_eq!(d.witness.coords(), &[1.0, -2.0]);

        let d = dp_distance(one, &seq(&m, &["a", "a"]), &seq(&m, &["b", "0"]), VERTEX_CAP).unwrap();
        assert_eq!(d.value, 4.0);

        for p in [PNorm::Finite(1.0), PNorm::Finite(2.5), PNorm::Infinity] {
            let s = seq(&m, &["a", "b", "a"]);
            assert_eq!(dp_distance(p, &s, &s, VERTEX_CAP).unwrap().value, 0.0);
        }
    }

    #[test]
    fn dp_norm_examples() {
        let m = m3();
        for p in [PNorm::Finite(1.0), PNorm::Finite(2.0), PNorm::Finite(3.7), PNorm::Infinity] {
            let v = dp_norm(p, &seq(&m, &["a"]), VERTEX_CAP).unwrap().value;
            assert!((v - 1.0).abs() < 1e-12, "p = {p}: {v}");
        }
        assert_eq!(dp_norm(PNorm::Finite(1.0), &SequencePoint::zero(m.clone()), VERTEX_CAP).unwrap().value, 0.0);
        assert_eq!(dp_norm(PNorm::Finite(1.0), &seq(&m, &["a", "b"]), VERTEX_CAP).unwrap().value, 3.0);
    }

    #[test]
    fn infinity_closed_form() {
        let m = m3();
        let d = dp_distance(PNorm::Infinity, &seq(&m, &["a", "0"]), &seq(&m, &["b", "a"]), VERTEX_CAP).unwrap();
        assert_eq!(d.value, 3.0);
        assert_eq!(d.closed_form, Some(3.0));
    }

    #[test]
    fn trailing_base_trimmed() {
        let m = m3();
        assert_eq!(seq(&m, &["a", "0", "0"]).indices(), &[1]);
        assert_eq!(seq(&m, &["0", "a"]).indices(), &[0, 1]);
    }

    #[test]
    fn p_validation() {
        assert!(PNorm::new(0.5).is_err());
        assert_eq!("inf".parse::<PNorm>().unwrap(), PNorm::Infinity);
        assert_eq!("2".parse::<PNorm>().unwrap(), PNorm::Finite(2.0));
        assert!("abc".parse::<PNorm>().is_err());
    }

    #[test]
    fn operator_norm_matches() {
        let m = m3();
        for p in [PNorm::Finite(1.0), PNorm::Finite(2.0), PNorm::Infinity] {
            let (s, t) = (seq(&m, &["a", "a", "b"]), seq(&m, &["b", "0", "b"]));
            let dp = dp_distance(p, &s, &t, VERTEX_CAP).unwrap().value;
            let op = tx_operator_norm(p, &s, &t, VERTEX_CAP).unwrap();
            assert!((dp - op).abs() < 1e-12);
        }
    }

    #[test]
    fn dilation_examples() {
        let m = m3();
        let swap = PointMap::new(m.clone(), m.clone(), vec![0, 2, 1]).unwrap();
        assert_eq!(dilate(&swap, &seq(&m, &["a", "b"])).unwrap().labels(), vec!["b", "a"]);
        assert!(dilate(&swap, &seq(&m, &["0"])).unwrap().is_empty());
        let id = PointMap::identity(m.clone());
        assert_eq!(dilate(&id, &seq(&m, &["b", "a"])).unwrap(), seq(&m, &["b", "a"]));

        let pairs = vec![(seq(&m, &["a"]), seq(&m, &["b"])), (seq(&m, &["a", "b"]), seq(&m, &["0", "a"]))];
        let r = dilation_certificates(PNorm::Finite(1.0), &swap, &pairs, VERTEX_CAP, DEFAULT_TOL).unwrap();
        assert_eq!(r.singleton_ratios, vec![2.0, 0.5]);
        assert_eq!(r.singleton_max, 2.0);
        assert!(r.holds(), "{r:?}");

        let z = PointMap::constant_base(m.clone(), m.clone());
        let r = dilation_certificates(PNorm::Infinity, &z, &pairs, VERTEX_CAP, DEFAULT_TOL).unwrap();
        assert!(r.pairs.iter().all(|c| c.dilated == 0.0));
        assert!(r.holds());

        let r = dilation_certificates(PNorm::Finite(2.0), &id, &pairs, VERTEX_CAP, DEFAULT_TOL).unwrap();
        assert!(r.pairs.iter().all(|c| c.dilated <= c.original + 1e-12));
        assert_eq!(r.singleton_max, 1.0);
        assert!(r.holds());
    }
}
