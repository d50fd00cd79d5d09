// SPDX-License-Identifier: Apache-2.0

//! Moduli of continuity and pointwise Lipschitz quantities.
//!
//! On a finite space every supremum is a maximum over finitely many
//! candidates, so all values here are exact. Ties go to the lowest index.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{Mapping, RealFunctionSample, VectorMap};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulusValue {
    pub t: f64,
    pub value: f64,
    /// Attaining pair, `None` when only diagonal pairs are admissible.
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRatio {
    pub value: f64,
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRatio {
    pub value: f64,
    pub witness: Option<usize>,
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain("t", t))
    }
}

/// `ω_f(t)`: the largest image distance over pairs at distance at most `t`.
pub fn omega<F: Mapping>(f: &F, t: f64) -> Result<ModulusValue> {
    check_t(t)?;
    let m = f.src();
    let mut best = ModulusValue { t, value: 0.0, witness: None };
    for i in 0..m.len() {
        for j in (i + 1)..m.len() {
            if m.d(i, j) <= t {
                let v = f.image_dist(i, j);
                if best.witness.is_none() || v > best.value {
                    best.value = v;
                    best.witness = Some((i, j));
                }
            }
        }
    }
    Ok(best)
}

/// `ω_f^{x0}(t)`: the largest `d(f(x), f(x0))` over `x` within `t` of `x0`.
pub fn omega_at<F: Mapping>(f: &F, x0: usize, t: f64) -> Result<ModulusValue> {
    check_t(t)?;
    let m = f.src();
    m.check_index(x0)?;
    let mut best = ModulusValue { t, value: 0.0, witness: None };
    for x in (0..m.len()).filter(|&x| x != x0) {
        if m.d(x, x0) <= t {
            let v = f.image_dist(x, x0);
            if best.witness.is_none() || v > best.value {
                best.value = v;
                best.witness = Some((x, x0));
            }
        }
    }
    Ok(best)
}

/// Global Lipschitz constant: the maximum ratio over distinct pairs.
pub fn lip_const<F: Mapping>(f: &F) -> PairRatio {
    let m = f.src();
    let mut best = PairRatio { value: 0.0, witness: None };
    for i in 0..m.len() {
        for j in (i + 1)..m.len() {
            let r = f.image_dist(i, j) / m.d(i, j);
            if best.witness.is_none() || r > best.value {
                best = PairRatio { value: r, witness: Some((i, j)) };
            }
        }
    }
    best
}

/// Pointwise Lipschitz semi-norm `‖f‖_{x0}`.
pub fn lip_at<F: Mapping>(f: &F, x0: usize) -> Result<PointRatio> {
    let m = f.src();
    m.check_index(x0)?;
    let mut best = PointRatio { value: 0.0, witness: None };
    for x in (0..m.len()).filter(|&x| x != x0) {
        let r = f.image_dist(x, x0) / m.d(x, x0);
        if best.witness.is_none() || r > best.value {
            best = PointRatio { value: r, witness: Some(x) };
        }
    }
    Ok(best)
}

/// `‖f‖_{L^{x0}} = max(‖f‖_{x0}, ‖f(x0)‖)`.
pub fn norm_lx(f: &VectorMap, x0: usize) -> Result<f64> {
    let semi = lip_at(f, x0)?.value;
    Ok(semi.max(f.image_norm(x0)))
}

/// `sup_{t>0} ω_f^{x0}(t) / t`, evaluated at the realized distances from
/// `x0`.
///
/// Between consecutive realized distances the modulus is constant and the
/// ratio decreases, so the supremum sits at one of them.
pub fn sup_omega_ratio<F: Mapping>(f: &F, x0: usize) -> Result<PointRatio> {
    let m = f.src();
    m.check_index(x0)?;
    let mut best = PointRatio { value: 0.0, witness: None };
    for x in (0..m.len()).filter(|&x| x != x0) {
        let t = m.d(x, x0);
        let r = omega_at(f, x0, t)?.value / t;
        if best.witness.is_none() || r > best.value {
            best = PointRatio { value: r, witness: Some(x) };
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledLip {
    /// `max_{x≠0} |f(x)| / |x|` on the grid.
    pub e_const: f64,
    pub e_witness: Option<f64>,
    /// Largest slope between adjacent grid points; a lower bound for the
    /// Lipschitz constant of the sampled function.
    pub lip_est: f64,
    pub lip_witness: Option<(f64, f64)>,
}

/// e-constant and adjacent-slope Lipschitz estimate of a sampled real
/// function. Fails with [`Error::BaseNotPreserved`] when `|f(0)| > tol`.
pub fn sampled_lip_quantities(f: &RealFunctionSample, tol: f64) -> Result<SampledLip> {
    let (grid, vals) = (f.grid(), f.values());
    if grid.len() < 2 {
        return Err(Error::Invalid("sampled function needs at least two grid points".into()));
    }
    let f0 = vals[f.base()];
    if f0.abs() > tol {
        return Err(Error::BaseNotPreserved(f0.abs()));
    }
    let mut out = SampledLip {
        e_const: 0.0,
        e_witness: None,
        lip_est: 0.0,
        lip_witness: None,
    };
    for (i, (&x, &y)) in grid.iter().zip(vals).enumerate() {
        if i == f.base() {
            continue;
        }
        let r = y.abs() / x.abs();
        if out.e_witness.is_none() || r > out.e_const {
            out.e_const = r;
            out.e_witness = Some(x);
        }
    }
    for i in 0..grid.len() - 1 {
        let s = (vals[i + 1] - vals[i]).abs() / (grid[i + 1] - grid[i]);
        if out.lip_witness.is_none() || s > out.lip_est {
            out.lip_est = s;
            out.lip_witness = Some((grid[i], grid[i + 1]));
        }
    }
    Ok(out)
}
