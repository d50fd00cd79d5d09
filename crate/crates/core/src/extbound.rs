// SPDX-License-Identifier: Apache-2.0

//! Extensively bounded maps: the e-constant `sup_{x≠0} d(T(x), 0)/d(x, 0)`,
//! the metric `d_e`, and the embedding of maps on the unit ball by radial
//! retraction.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{
    induced_space, restrict_to_ball, same_space, BallRestriction, CoordSpace, Mapping, NormTag,
    PointedMetricSpace, VectorMap,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EConstant {
    pub value: f64,
    /// Attaining non-base point; `None` on a singleton.
    pub witness: Option<usize>,
}

fn check_base<F: Mapping>(f: &F, tol: f64) -> Result<()> {
    let b = f.image_norm(0);
    if b > tol {
        Err(Error::BaseNotPreserved(b))
    } else {
        Ok(())
    }
}

/// `‖T‖_e = d_e(T, 0)`. Fails when `T` does not fix the base point.
pub fn e_constant<F: Mapping>(f: &F, tol: f64) -> Result<EConstant> {
    check_base(f, tol)?;
    let m = f.src();
    let mut best = EConstant { value: 0.0, witness: None };
    for x in m.non_base() {
        let r = f.image_norm(x) / m.norm(x);
        if best.witness.is_none() || r > best.value {
            best = EConstant { value: r, witness: Some(x) };
        }
    }
    Ok(best)
}

/// `d_e(T, S) = max_{x≠0} d(T(x), S(x)) / d(x, 0)`.
pub fn de_distance<F: Mapping>(t: &F, s: &F, tol: f64) -> Result<EConstant> {
    if !t.same_spaces(s) {
        return Err(Error::SpaceMismatch);
    }
    check_base(t, tol)?;
    check_base(s, tol)?;
    let m = t.src();
    let mut best = EConstant { value: 0.0, witness: None };
    for x in m.non_base() {
        let r = t.cross_dist(s, x) / m.norm(x);
        if best.witness.is_none() || r > best.value {
            best = EConstant { value: r, witness: Some(x) };
        }
    }
    Ok(best)
}

/// Identity on the closed unit ball, `x/‖x‖` outside it.
///
/// The quotient can round to a norm just above 1; it is then shrunk by an
/// ulp at a time so that the image always lies in the closed ball.
pub fn radial_retract(x: &[f64], norm: NormTag) -> Vec<f64> {
    let n = norm.norm(x);
    if n <= 1.0 {
        return x.to_vec();
    }
    let mut y: Vec<f64> = x.iter().map(|v| v / n).collect();
    while norm.norm(&y) > 1.0 {
        y.iter_mut().for_each(|v| *v *= 1.0 - f64::EPSILON);
    }
    y
}

/// A coordinate sample whose unit-ball part is closed under radial
/// retraction, with both induced metric spaces.
#[derive(Clone, Debug)]
pub struct BallEmbedding {
    sample: CoordSpace,
    sample_space: Arc<PointedMetricSpace>,
    ball: BallRestriction,
    ball_space: Arc<PointedMetricSpace>,
    /// Ball index of the retraction of each sample point.
    retract: Vec<usize>,
}

impl BallEmbedding {
    /// Fails with [`Error::NotRetractionClosed`] listing every sample point
    /// whose retraction has no ball point within `tol`.
    pub fn new(sample: CoordSpace, tol: f64) -> Result<Self> {
        let ball = restrict_to_ball(&sample);
        let norm = sample.norm_tag();
        let mut retract = Vec::with_capacity(sample.len());
        let mut missing = Vec::new();
        for i in 0..sample.len() {
            let g = radial_retract(sample.point(i), norm);
            match ball.ball.find(&g, tol) {
                Some(b) => retract.push(b),
                None => {
                    missing.push(i);
                    retract.push(usize::MAX);
                }
            }
        }
        if !missing.is_empty() {
            return Err(Error::NotRetractionClosed(missing));
        }
        let sample_space = Arc::new(induced_space(&sample)?);
        let ball_space = Arc::new(induced_space(&ball.ball)?);
        Ok(BallEmbedding {
            sample,
            sample_space,
            ball,
            ball_space,
            retract,
        })
    }

    pub fn sample(&self) -> &CoordSpace {
        &self.sample
    }

    pub fn sample_space(&self) -> &Arc<PointedMetricSpace> {
        &self.sample_space
    }

    pub fn ball(&self) -> &BallRestriction {
        &self.ball
    }

    pub fn ball_space(&self) -> &Arc<PointedMetricSpace> {
        &self.ball_space
    }

    /// Ball index of `G(x_i)`.
    pub fn retraction_of(&self, i: usize) -> usize {
        self.retract[i]
    }

    /// `Γ(f) = f ∘ G` for `f` defined on the ball.
    pub fn gamma(&self, f: &VectorMap) -> Result<VectorMap> {
        if !same_space(f.src_space(), &self.ball_space) {
            return Err(Error::SpaceMismatch);
        }
        let values = self.retract.iter().map(|&b| f.value(b).to_vec()).collect();
        VectorMap::new(self.sample_space.clone(), f.k(), f.norm_tag(), values)
    }

    /// `η(f) = f|_{B_X}` for `f` defined on the whole sample.
    pub fn eta(&self, f: &VectorMap) -> Result<VectorMap> {
        if !same_space(f.src_space(), &self.sample_space) {
            return Err(Error::SpaceMismatch);
        }
        let values = self.ball.parent.iter().map(|&i| f.value(i).to_vec()).collect();
        VectorMap::new(self.ball_space.clone(), f.k(), f.norm_tag(), values)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReciprocalCheck {
    /// Always true for a finite truncation.
    pub in_e: bool,
    /// `max_n n·|x_n|`, the e-constant of the truncated function on
    /// `{1/n} ∪ {0}`.
    pub k: f64,
    /// The (1-based) `n` attaining `k`.
    pub witness_n: usize,
}

/// Reads `values[n-1]` as `f(1/n)` with `f(0) = 0`.
pub fn reciprocal_space_check(values: &[f64]) -> Result<ReciprocalCheck> {
    if values.is_empty() {
        return Err(Error::Invalid("reciprocal check needs at least one value".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("sequence values must be finite".into()));
    }
    let mut out = ReciprocalCheck { in_e: true, k: 0.0, witness_n: 1 };
    for (i, v) in values.iter().enumerate() {
        let n = (i + 1) as f64;
        let r = n * v.abs();
        if r > out.k {
            out.k = r;
            out.witness_n = i + 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{PointMap, DEFAULT_TOL};
    use crate::moduli::lip_const;

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
    fn e_constant_examples() {
        let m = m3();
        let swap = PointMap::new(m.clone(), m.clone(), vec![0, 2, 1]).unwrap();
        let e = e_constant(&swap, DEFAULT_TOL).unwrap();
        assert_eq!((e.value, e.witness), (2.0, Some(1)));
        let z = PointMap::constant_base(m.clone(), m.clone());
        assert_eq!(e_constant(&z, DEFAULT_TOL).unwrap().value, 0.0);
        let bad = PointMap::new(m.clone(), m.clone(), vec![1, 1, 2]).unwrap();
        assert!(matches!(e_constant(&bad, DEFAULT_TOL), Err(Error::BaseNotPreserved(_))));
        let single = Arc::new(PointedMetricSpace::singleton());
        assert_eq!(e_constant(&PointMap::identity(single), DEFAULT_TOL).unwrap().value, 0.0);
        assert_eq!(e_constant(&PointMap::identity(m), DEFAULT_TOL).unwrap().value, 1.0);
    }

    #[test]
    fn de_examples() {
        let m = m3();
        let t = PointMap::new(m.clone(), m.clone(), vec![0, 2, 1]).unwrap();
        let s = PointMap::identity(m.clone());
        assert_eq!(de_distance(&t, &s, DEFAULT_TOL).unwrap().value, 1.5);
        assert_eq!(de_distance(&s, &t, DEFAULT_TOL).unwrap().value, 1.5);
        assert_eq!(de_distance(&t, &t, DEFAULT_TOL).unwrap().value, 0.0);

        let other = Arc::new(PointedMetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        let u = PointMap::constant_base(m.clone(), other);
        let v = PointMap::constant_base(m.clone(), m);
        assert!(matches!(de_distance(&u, &v, DEFAULT_TOL), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn e_constant_below_lipschitz() {
        let m = m3();
        let f = VectorMap::scalar(m, &[0.0, 1.0, -0.5]).unwrap();
        assert!(e_constant(&f, DEFAULT_TOL).unwrap().value <= lip_const(&f).value);
    }

    #[test]
    fn retraction_cases() {
        assert_eq!(radial_retract(&[0.5], NormTag::Two), vec![0.5]);
        assert_eq!(radial_retract(&[2.0], NormTag::Two), vec![1.0]);
        assert_eq!(radial_retract(&[1.0], NormTag::Two), vec![1.0]);
        assert_eq!(radial_retract(&[3.0, -4.0], NormTag::Two), vec![0.6, -0.8]);
        assert_eq!(radial_retract(&[2.0, -1.0], NormTag::Sup), vec![1.0, -0.5]);
    }

    #[test]
    fn retraction_lands_in_ball() {
        for norm in [NormTag::One, NormTag::Two, NormTag::Sup] {
            for i in 1..2000 {
                let x = [1.0 + i as f64 * 0.37, -(i as f64).sqrt(), 0.1 * i as f64];
                let g = radial_retract(&x, norm);
                assert!(norm.norm(&g) <= 1.0);
                assert!((norm.norm(&g) - 1.0).abs() < 1e-15);
                assert_eq!(radial_retract(&g, norm), g);
            }
        }
    }

    fn line_sample() -> CoordSpace {
        let xs = [0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0];
        CoordSpace::from_coords(xs.iter().map(|&x| vec![x]).collect(), NormTag::Two).unwrap()
    }

    #[test]
    fn gamma_and_eta() {
        let emb = BallEmbedding::new(line_sample(), DEFAULT_TOL).unwrap();
        assert_eq!(emb.ball_space().len(), 5);
        // f on {0, 0.5, -0.5, 1, -1}
        let f = VectorMap::scalar(emb.ball_space().clone(), &[0.0, 0.3, -0.1, 0.7, 0.2]).unwrap();
        let g = emb.gamma(&f).unwrap();
        assert_eq!(g.value(5), &[0.7]); // Γ(f)(2) = f(1)
        assert_eq!(g.value(6), &[0.2]);
        assert_eq!(g.value(1), &[0.3]);
        assert_eq!(emb.eta(&g).unwrap(), f);
        assert_eq!(
            e_constant(&g, DEFAULT_TOL).unwrap().value,
            e_constant(&f, DEFAULT_TOL).unwrap().value
        );
        let z = VectorMap::zeros(emb.ball_space().clone(), 1, NormTag::Two);
        assert_eq!(emb.gamma(&z).unwrap(), VectorMap::zeros(emb.sample_space().clone(), 1, NormTag::Two));
        let zs = VectorMap::zeros(emb.sample_space().clone(), 1, NormTag::Two);
        assert_eq!(emb.eta(&zs).unwrap(), z);

        let h = VectorMap::scalar(emb.sample_space().clone(), &[0.0, 0.1, 0.2, 0.3, 0.4, 5.0, -6.0]).unwrap();
        let eh = emb.eta(&h).unwrap();
        assert!(e_constant(&eh, DEFAULT_TOL).unwrap().value <= e_constant(&h, DEFAULT_TOL).unwrap().value);
    }

    #[test]
    fn gamma_requires_closed_sample() {
        let c = CoordSpace::from_coords(vec![vec![0.0], vec![0.5], vec![2.0], vec![-3.0]], NormTag::Two).unwrap();
        match BallEmbedding::new(c, DEFAULT_TOL) {
            Err(Error::NotRetractionClosed(pts)) => assert_eq!(pts, vec![2, 3]),
            other => panic!("expected closure error, got {other:?}"),
        }
    }

    #[test]
    fn reciprocal_examples() {
        let harmonic: Vec<f64> = (1..=50).map(|n| 1.0 / n as f64).collect();
        let r = reciprocal_space_check(&harmonic).unwrap();
        assert!(r.in_e);
        assert!((r.k - 1.0).abs() < 1e-12);

        let alt: Vec<f64> = (1..=50).map(|n| (-1f64).powi(n) / (n * n) as f64).collect();
        let r = reciprocal_space_check(&alt).unwrap();
        assert_eq!((r.k, r.witness_n), (1.0, 1));

        let root: Vec<f64> = (1..=100).map(|n| 1.0 / (n as f64).sqrt()).collect();
        let r = reciprocal_space_check(&root).unwrap();
        assert!((r.k - 10.0).abs() < 1e-12);
        assert_eq!(r.witness_n, 100);
        assert!(reciprocal_space_check(&[]).is_err());
    }
}
