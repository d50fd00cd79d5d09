// SPDX-License-Identifier: Apache-2.0

//! The isometry between bounded tables and maps Lipschitz at a point, and
//! the transfer between two base points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{CoordSpace, Mapping, VectorMap};

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

/// `g(x') = d(x', x)·h(x') + h(x)`.
pub fn phi(x: usize, h: &VectorMap) -> Result<VectorMap> {
    let m = h.src();
    m.check_index(x)?;
    let hx = h.value(x);
    let values = (0..m.len()).map(|xp| axpy(m.d(xp, x), h.value(xp), hx)).collect();
    h.with_values(values)
}

/// Inverse of [`phi`]: `h(x') = (g(x') − g(x)) / d(x', x)` off `x`, `h(x) = g(x)`.
pub fn phi_inv(x: usize, g: &VectorMap) -> Result<VectorMap> {
    let m = g.src();
    m.check_index(x)?;
    let gx = g.value(x);
    let values = (0..m.len())
        .map(|xp| {
            if xp == x {
                gx.to_vec()
            } else {
                let d = m.d(xp, x);
                g.value(xp).iter().zip(gx).map(|(a, b)| (a - b) / d).collect()
            }
        })
        .collect();
    g.with_values(values)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transfer {
    /// `phi(x2, phi_inv(x1, f))`.
    pub composed: VectorMap,
    /// The same map evaluated from its explicit formula.
    pub closed_form: VectorMap,
}

impl Transfer {
    pub fn discrepancy(&self) -> f64 {
        self.composed.max_abs_diff(&self.closed_form)
    }
}

/// Moves a map Lipschitz at `x1` to one Lipschitz at `x2`, both by
/// composition and by the explicit formula
/// `(d(x, x2)/d(x, x1))(f(x) − f(x1)) + (f(x2) − f(x1))/d(x2, x1)`
/// (at `x = x1` the first term is `d(x1, x2)·f(x1)`).
pub fn transfer_compose(x1: usize, x2: usize, f: &VectorMap) -> Result<Transfer> {
    let m = f.src();
    m.check_index(x1)?;
    m.check_index(x2)?;
    if x1 == x2 {
        return Err(Error::Degenerate("transfer needs two distinct base points".into()));
    }
    let composed = phi(x2, &phi_inv(x1, f)?)?;

    let d12 = m.d(x1, x2);
    let (f1, f2) = (f.value(x1), f.value(x2));
    let shift: Vec<f64> = f2.iter().zip(f1).map(|(b, a)| (b - a) / d12).collect();
    let values = (0..m.len())
        .map(|x| {
            if x == x1 {
                axpy(d12, f1, &shift)
            } else {
                let scale = m.d(x, x2) / m.d(x, x1);
                f.value(x)
                    .iter()
                    .zip(f1)
                    .zip(&shift)
                    .map(|((fx, a), s)| scale * (fx - a) + s)
                    .collect()
            }
        })
        .collect();
    let closed_form = f.with_values(values)?;
    Ok(Transfer { composed, closed_form })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingViolation {
    pub point: usize,
    pub value_norm: f64,
    pub dist_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingReport {
    pub is_fixed_point: bool,
    pub vanishing_holds: bool,
    pub violations: Vec<VanishingViolation>,
}

impl VanishingReport {
    /// The implication "fixed point ⇒ vanishes off the equidistant set".
    pub fn passes(&self) -> bool {
        !self.is_fixed_point || self.vanishing_holds
    }
}

/// Falsification check: a fixed point of the `x1 → x2` transfer must
/// vanish at every sample point not equidistant from `x1` and `x2`.
///
/// `f` must be defined on the metric induced by `space`.
pub fn vanishing_check(space: &CoordSpace, f: &VectorMap, x1: usize, x2: usize, tol: f64) -> Result<VanishingReport> {
    if f.src().len() != space.len() || f.src().labels() != space.labels() {
        return Err(Error::SpaceMismatch);
    }
    let t = transfer_compose(x1, x2, f)?;
    let is_fixed_point = t.composed.max_abs_diff(f) <= tol;
    let norm = space.norm_tag();
    let mut violations = Vec::new();
    for x in 0..space.len() {
        let gap = (norm.dist(space.point(x), space.point(x1)) - norm.dist(space.point(x), space.point(x2))).abs();
        if gap > tol {
            let v = f.image_norm(x);
            if v > tol {
                violations.push(VanishingViolation { point: x, value_norm: v, dist_gap: gap });
            }
        }
    }
    Ok(VanishingReport {
        is_fixed_point,
        vanishing_holds: violations.is_empty(),
        violations,
    })
}
