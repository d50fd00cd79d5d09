// SPDX-License-Identifier: Apache-2.0

//! The dual-like space `M^e` of a finite pointed space.
//!
//! On a finite `M`, `M^e` is the space of real functions vanishing at the
//! base point, one coordinate per non-base point `z`, with norm
//! `max_z |v_z| / d(z, 0)`. Its unit ball is the box `|v_z| ≤ d(z, 0)`, so
//! any convex objective over the ball peaks at one of its `2^(m-1)` vertices.
//! The vertex enumeration here is the exact oracle the closed forms are
//! checked against.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{same_space, Mapping, NormTag, PointMap, PointedMetricSpace, VectorMap};

/// Largest number of free box coordinates the vertex oracle will enumerate.
pub const VERTEX_CAP: usize = 20;

/// Maximizes `objective` over the vertices of `∏ [-r_i, r_i]`.
///
/// Vertices are visited in lexicographic sign order (`+` before `-`, first
/// coordinate most significant); the first maximizer wins ties.
pub fn max_over_box_vertices<F>(radii: &[f64], cap: usize, mut objective: F) -> Result<(f64, Vec<f64>)>
where
    F: FnMut(&[f64]) -> f64,
{
    let m = radii.len();
    if m > cap {
        return Err(Error::Capacity { points: m, cap });
    }
    let mut v = radii.to_vec();
    let mut best = (objective(&v), v.clone());
    for code in 1u64..(1u64 << m) {
        for (j, r) in radii.iter().enumerate() {
            v[j] = if code >> (m - 1 - j) & 1 == 1 { -r } else { *r };
        }
        let val = objective(&v);
        if val > best.0 {
            best = (val, v.clone());
        }
    }
    Ok(best)
}

/// An element of `M^e`: `v[z - 1]` is the value at non-base point `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    space: Arc<PointedMetricSpace>,
    v: Vec<f64>,
}

impl Functional {
    pub fn new(space: Arc<PointedMetricSpace>, v: Vec<f64>) -> Result<Self> {
        if v.len() + 1 != space.len() {
            return Err(Error::Invalid(format!(
                "functional has {} coordinates, space has {} non-base points",
                v.len(),
                space.len() - 1
            )));
        }
        Ok(Functional { space, v })
    }

    /// The functional given by values at every point; the base value must
    /// be zero.
    pub fn from_values(space: Arc<PointedMetricSpace>, values: &[f64]) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Invalid("one value per point expected".into()));
        }
        if values[0] != 0.0 {
            return Err(Error::BaseNotPreserved(values[0].abs()));
        }
        Self::new(space, values[1..].to_vec())
    }

    pub fn zero(space: Arc<PointedMetricSpace>) -> Self {
        let v = vec![0.0; space.len() - 1];
        Functional { space, v }
    }

    /// `z ↦ d(z, 0)`, a unit vector of `M^e`.
    pub fn distance_to_base(space: Arc<PointedMetricSpace>) -> Self {
        let v = space.non_base().map(|z| space.norm(z)).collect();
        Functional { space, v }
    }

    pub fn space(&self) -> &Arc<PointedMetricSpace> {
        &self.space
    }

    pub fn coords(&self) -> &[f64] {
        &self.v
    }

    #[inline]
    pub fn eval(&self, x: usize) -> f64 {
        if x == 0 {
            0.0
        } else {
            self.v[x - 1]
        }
    }

    pub fn e_norm(&self) -> f64 {
        self.v
            .iter()
            .enumerate()
            .fold(0.0, |m, (i, vz)| m.max(vz.abs() / self.space.norm(i + 1)))
    }

    pub fn in_unit_ball(&self, tol: f64) -> bool {
        self.v.iter().enumerate().all(|(i, vz)| vz.abs() <= self.space.norm(i + 1) + tol)
    }

    /// `f ∘ T`, a functional on the source of `T`.
    pub fn pull_back(&self, t: &PointMap) -> Result<Functional> {
        if !same_space(t.dst_space(), &self.space) {
            return Err(Error::SpaceMismatch);
        }
        if !t.preserves_base() {
            return Err(Error::BaseNotPreserved(t.image_norm(0)));
        }
        let src = t.src_space().clone();
        let v = src.non_base().map(|x| self.eval(t.apply(x))).collect();
        Ok(Functional { space: src, v })
    }

    pub fn labelled(&self) -> Vec<(String, f64)> {
        self.space
            .non_base()
            .map(|z| (self.space.label(z).to_string(), self.v[z - 1]))
            .collect()
    }
}

impl Serialize for Functional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.v.len()))?;
        for (label, v) in self.labelled() {
            map.serialize_entry(&label, &v)?;
        }
        map.end()
    }
}

fn radii(space: &PointedMetricSpace) -> Vec<f64> {
    space.non_base().map(|z| space.norm(z)).collect()
}

/// All vertices of the unit ball of `M^e` in lexicographic sign order.
pub fn ball_vertices(space: &Arc<PointedMetricSpace>, cap: usize) -> Result<Vec<Functional>> {
    let r = radii(space);
    let mut out = Vec::new();
    max_over_box_vertices(&r, cap, |v| {
        out.push(Functional { space: space.clone(), v: v.to_vec() });
        0.0
    })?;
    Ok(out)
}

/// `‖x̌ − y̌‖`: coordinates of the box vary independently, so the
/// supremum of `|f(x) − f(y)|` is `d(x, 0) + d(y, 0)` for `x ≠ y`.
pub fn dual_distance(space: &PointedMetricSpace, x: usize, y: usize) -> Result<f64> {
    space.check_index(x)?;
    space.check_index(y)?;
    Ok(if x == y { 0.0 } else { space.norm(x) + space.norm(y) })
}

/// `‖x̌ − y̌‖` by enumerating every vertex of the unit ball.
pub fn dual_distance_oracle(space: &Arc<PointedMetricSpace>, x: usize, y: usize, cap: usize) -> Result<f64> {
    space.check_index(x)?;
    space.check_index(y)?;
    let at = |v: &[f64], p: usize| if p == 0 { 0.0 } else { v[p - 1] };
    let (best, _) = max_over_box_vertices(&radii(space), cap, |v| (at(v, x) - at(v, y)).abs())?;
    Ok(best)
}

/// Matrix of `T^e: f ↦ f ∘ T` in the coordinates of `N^e` (columns) and
/// `M^e` (rows).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdjointMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<f64>>,
}

impl AdjointMatrix {
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(f).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self · other`.
    pub fn mul(&self, other: &AdjointMatrix) -> Result<AdjointMatrix> {
        if self.cols != other.rows {
            return Err(Error::SpaceMismatch);
        }
        let entries = self
            .entries
            .iter()
            .map(|row| {
                (0..other.cols)
                    .map(|c| row.iter().enumerate().map(|(k, a)| a * other.entries[k][c]).sum())
                    .collect()
            })
            .collect();
        Ok(AdjointMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        AdjointMatrix { rows: n, cols: n, entries }
    }
}

pub fn adjoint(t: &PointMap) -> Result<AdjointMatrix> {
    if !t.preserves_base() {
        return Err(Error::BaseNotPreserved(t.image_norm(0)));
    }
    let (m, n) = (t.src_space().len() - 1, t.dst_space().len() - 1);
    let mut entries = vec![vec![0.0; n]; m];
    for x in t.src_space().non_base() {
        let y = t.apply(x);
        if y != 0 {
            entries[x - 1][y - 1] = 1.0;
        }
    }
    Ok(AdjointMatrix { rows: m, cols: n, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdjointNorm {
    /// `max_{x≠0} d(T(x), 0) / d(x, 0)`.
    pub closed_form: f64,
    /// `max` over unit-ball vertices `f` of `N^e` of `‖f ∘ T‖_e`; `None`
    /// when `N` exceeds the vertex cap.
    pub oracle: Option<f64>,
}

pub fn adjoint_norm(t: &PointMap, cap: usize) -> Result<AdjointNorm> {
    let a = adjoint(t)?;
    let src = t.src_space();
    let closed_form = src
        .non_base()
        .map(|x| t.dst_space().norm(t.apply(x)) / src.norm(x))
        .fold(0.0, f64::max);
    let e_norm_src = |g: &[f64]| {
        g.iter()
            .enumerate()
            .fold(0.0, |m, (i, gz)| f64::max(m, gz.abs() / src.norm(i + 1)))
    };
    let oracle = match max_over_box_vertices(&radii(t.dst_space()), cap, |f| e_norm_src(&a.apply(f))) {
        Ok((best, _)) => Some(best),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(AdjointNorm { closed_form, oracle })
}

/// `x̌(T^e f)` and `f(T(x))`; equal because `T^{ee}(x̌) = (T x)ˇ`.
pub fn second_adjoint_eval(t: &PointMap, x: usize, f: &Functional) -> Result<(f64, f64)> {
    if !same_space(t.dst_space(), f.space()) {
        return Err(Error::SpaceMismatch);
    }
    t.src_space().check_index(x)?;
    let a = adjoint(t)?;
    let pulled = a.apply(f.coords());
    let lhs = if x == 0 { 0.0 } else { pulled[x - 1] };
    let rhs = f.eval(t.apply(x));
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaNorm {
    /// `max_{x≠0} ‖T(x)‖_{q'} / d(x, 0)`.
    pub t_e_norm: f64,
    /// `sup_{‖y‖_q ≤ 1} ‖x ↦ ⟨y, T(x)⟩‖_e`, over a finite set of `y` that
    /// contains a maximizer.
    pub lambda_opnorm: f64,
}

/// Reads `T` as a map into the dual of `(ℝ^k, ‖·‖_q)` and computes both
/// sides of the `Λ` isometry.
///
/// The operator-norm side swaps the order of the suprema: for each
/// candidate `y` it takes the e-norm of `x ↦ ⟨y, T(x)⟩`. Candidates are the
/// extreme points of the `ℓ1` ball (`±e_i`), of the `ℓ∞` ball (sign
/// vectors), or for `ℓ2` the normalized images `T(x)/‖T(x)‖₂`.
pub fn lambda_norm(t: &VectorMap, q: NormTag, tol: f64) -> Result<LambdaNorm> {
    let b = NormTag::Sup.norm(t.value(0));
    if b > tol {
        return Err(Error::BaseNotPreserved(b));
    }
    let m = t.src();
    let k = t.k();
    let dual = q.dual();
    let t_e_norm = m
        .non_base()
        .map(|x| dual.norm(t.value(x)) / m.norm(x))
        .fold(0.0, f64::max);

    let functional_e_norm = |y: &[f64]| {
        m.non_base()
            .map(|x| {
                let ip: f64 = y.iter().zip(t.value(x)).map(|(a, b)| a * b).sum();
                ip.abs() / m.norm(x)
            })
            .fold(0.0, f64::max)
    };
    let lambda_opnorm = match q {
        NormTag::One => {
            let mut best = 0.0f64;
            for i in 0..k {
                for s in [1.0, -1.0] {
                    let mut y = vec![0.0; k];
                    y[i] = s;
                    best = best.max(functional_e_norm(&y));
                }
            }
            best
        }
        NormTag::Sup => max_over_box_vertices(&vec![1.0; k], VERTEX_CAP, functional_e_norm)?.0,
        NormTag::Two => m
            .non_base()
            .filter_map(|x| {
                let n = NormTag::Two.norm(t.value(x));
                (n > 0.0).then(|| t.value(x).iter().map(|v| v / n).collect::<Vec<_>>())
            })
            .map(|y| functional_e_norm(&y))
            .fold(0.0, f64::max),
    };
    Ok(LambdaNorm { t_e_norm, lambda_opnorm })
}

/// Every coordinate functional `x ↦ ⟨e_i, T(x)⟩` is defined at every point,
/// which is all continuity asks of a function on a finite space.
pub fn is_p_continuous(t: &VectorMap) -> bool {
    t.values().iter().all(|v| v.len() == t.k() && v.iter().all(|x| x.is_finite()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::DEFAULT_TOL;

    fn m3() -> Arc<PointedMetricSpace> {
        Arc::new(
            PointedMetricSpace::from_matrix(vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.5],
                vec![2.0, 1.5, 0.0],
            ])
            .unwrap(),
        )
    }

    #[test]
    fn vertices_of_m3() {
        let m = m3();
        let vs = ball_vertices(&m, VERTEX_CAP).unwrap();
        let coords: Vec<Vec<f64>> = vs.iter().map(|f| f.coords().to_vec()).collect();
        assert_eq!(
            coords,
            vec![vec![1.0, 2.0], vec![1.0, -2.0], vec![-1.0, 2.0], vec![-1.0, -2.0]]
        );
        assert!(vs.iter().all(|f| f.e_norm() == 1.0));

        let single = Arc::new(PointedMetricSpace::singleton());
        let vs = ball_vertices(&single, VERTEX_CAP).unwrap();
        assert_eq!(vs.len(), 1);
        assert!(vs[0].coords().is_empty());
    }

    #[test]
    fn vertex_cap_enforced() {
        let err = max_over_box_vertices(&[1.0; 21], VERTEX_CAP, |_| 0.0).unwrap_err();
        assert!(matches!(err, Error::Capacity { points: 21, cap: 20 }));
    }

    #[test]
    fn dual_distance_examples() {
        let m = m3();
        assert_eq!(dual_distance(&m, 1, 0).unwrap(), 1.0);
        assert_eq!(dual_distance(&m, 1, 2).unwrap(), 3.0);
        assert!(dual_distance(&m, 1, 2).unwrap() >= m.d(1, 2));
        assert_eq!(dual_distance(&m, 1, 1).unwrap(), 0.0);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(
                    dual_distance(&m, x, y).unwrap(),
                    dual_distance_oracle(&m, x, y, VERTEX_CAP).unwrap()
                );
            }
        }
        assert_eq!(Functional::distance_to_base(m).e_norm(), 1.0);
    }

    #[test]
    fn adjoint_examples() {
        let m = m3();
        let swap = PointMap::new(m.clone(), m.clone(), vec![0, 2, 1]).unwrap();
        let a = adjoint(&swap).unwrap();
        assert_eq!(a.entries, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(adjoint(&PointMap::identity(m.clone())).unwrap(), AdjointMatrix::identity(2));
        let z = adjoint(&PointMap::constant_base(m.clone(), m.clone())).unwrap();
        assert!(z.entries.iter().flatten().all(|&e| e == 0.0));
        let bad = PointMap::new(m.clone(), m.clone(), vec![2, 1, 0]).unwrap();
        assert!(adjoint(&bad).is_err());

        let n = adjoint_norm(&swap, VERTEX_CAP).unwrap();
        assert_eq!((n.closed_form, n.oracle), (2.0, Some(2.0)));
        let n = adjoint_norm(&PointMap::identity(m.clone()), VERTEX_CAP).unwrap();
        assert_eq!((n.closed_form, n.oracle), (1.0, Some(1.0)));
        let n = adjoint_norm(&PointMap::constant_base(m.clone(), m), VERTEX_CAP).unwrap();
        assert_eq!((n.closed_form, n.oracle), (0.0, Some(0.0)));
    }

    #[test]
    fn second_adjoint_examples() {
        let m = m3();
        let swap = PointMap::new(m.clone(), m.clone(), vec![0, 2, 1]).unwrap();
        let f = Functional::new(m.clone(), vec![1.0, 2.0]).unwrap();
        assert_eq!(second_adjoint_eval(&swap, 1, &f).unwrap(), (2.0, 2.0));
        assert_eq!(second_adjoint_eval(&swap, 0, &f).unwrap(), (0.0, 0.0));
        let z = Functional::zero(m);
        assert_eq!(second_adjoint_eval(&swap, 2, &z).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn lambda_examples() {
        let m = m3();
        let t = VectorMap::new(m.clone(), 2, NormTag::Two, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]])
            .unwrap();
        let l = lambda_norm(&t, NormTag::Two, DEFAULT_TOL).unwrap();
        assert_eq!((l.t_e_norm, l.lambda_opnorm), (1.0, 1.0));
        let l = lambda_norm(&t, NormTag::Sup, DEFAULT_TOL).unwrap();
        assert_eq!((l.t_e_norm, l.lambda_opnorm), (1.0, 1.0));
        let l = lambda_norm(&t, NormTag::One, DEFAULT_TOL).unwrap();
        assert_eq!((l.t_e_norm, l.lambda_opnorm), (1.0, 1.0));
        let z = VectorMap::zeros(m.clone(), 3, NormTag::Two);
        let l = lambda_norm(&z, NormTag::Two, DEFAULT_TOL).unwrap();
        assert_eq!((l.t_e_norm, l.lambda_opnorm), (0.0, 0.0));
        assert!(is_p_continuous(&t));

        // ℓ1 dual of sup: ‖(1, 1)‖₁ = 2 at distance 1
        let u = VectorMap::new(m, 2, NormTag::Two, vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 2.0]]).unwrap();
        let l = lambda_norm(&u, NormTag::Sup, DEFAULT_TOL).unwrap();
        assert_eq!((l.t_e_norm, l.lambda_opnorm), (2.0, 2.0));
        let l = lambda_norm(&u, NormTag::One, DEFAULT_TOL).unwrap();
        assert_eq!((l.t_e_norm, l.lambda_opnorm), (1.0, 1.0));
    }
}
