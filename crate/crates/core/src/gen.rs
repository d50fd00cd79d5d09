// SPDX-License-Identifier: Apache-2.0

//! Seeded random instances for the verification suite.
//!
//! Two independent families of finite pointed spaces: point clouds in ℝ³
//! under the Euclidean norm, and abstract matrices made metric by a
//! shortest-path closure.

use std::sync::Arc;

use rand::Rng;

use crate::error::Result;
use crate::extbound::radial_retract;
use crate::metric::{CoordSpace, NormTag, PointMap, PointedMetricSpace, VectorMap};
use crate::sequences::SequencePoint;

/// Smallest allowed distance between cloud points, so that ratios stay
/// well conditioned.
const MIN_SEPARATION: f64 = 1e-2;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| if i == 0 { "0".to_string() } else { format!("p{i}") }).collect()
}

/// `n` points in `[-2, 2]³` with the first one as base.
pub fn cloud_coords<R: Rng>(rng: &mut R, n: usize, dim: usize, norm: NormTag) -> CoordSpace {
    let mut pts: Vec<Vec<f64>> = vec![vec![0.0; dim]];
    while pts.len() < n {
        let p: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        if pts.iter().all(|q| norm.dist(&p, q) >= MIN_SEPARATION) {
            pts.push(p);
        }
    }
    CoordSpace::new(labels(n), 0, pts, norm).expect("generated coordinates are valid")
}

/// Distances between `n` random points of ℝ³ under `ℓ2`. The base sits at
/// a random point rather than the origin.
pub fn cloud_space<R: Rng>(rng: &mut R, n: usize) -> PointedMetricSpace {
    let shift: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
    let c = cloud_coords(rng, n, 3, NormTag::Two);
    let pts: Vec<Vec<f64>> = c.coords().iter().map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
    let dist = (0..n)
        .map(|i| (0..n).map(|j| NormTag::Two.dist(&pts[i], &pts[j])).collect())
        .collect();
    PointedMetricSpace::new(labels(n), 0, dist).expect("Euclidean distances form a metric")
}

/// Random symmetric weights in `[0.2, 3)` closed under shortest paths.
pub fn abstract_space<R: Rng>(rng: &mut R, n: usize) -> PointedMetricSpace {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.random_range(0.2..3.0);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    PointedMetricSpace::new(labels(n), 0, d).expect("shortest-path closure is a metric")
}

/// A space with between 2 and `max_points` points from either family.
pub fn random_space<R: Rng>(rng: &mut R, max_points: usize) -> Arc<PointedMetricSpace> {
    let n = rng.random_range(2..=max_points.max(2));
    Arc::new(if rng.random_bool(0.5) {
        cloud_space(rng, n)
    } else {
        abstract_space(rng, n)
    })
}

/// A base-preserving map with uniformly random images.
pub fn random_point_map<R: Rng>(rng: &mut R, src: &Arc<PointedMetricSpace>, dst: &Arc<PointedMetricSpace>) -> PointMap {
    let table = (0..src.len())
        .map(|i| if i == 0 { 0 } else { rng.random_range(0..dst.len()) })
        .collect();
    PointMap::new(src.clone(), dst.clone(), table).expect("table indices are in range")
}

pub fn random_norm<R: Rng>(rng: &mut R) -> NormTag {
    [NormTag::One, NormTag::Two, NormTag::Sup][rng.random_range(0..3)]
}

/// Values uniform in `[-5, 5)^k`; the base value is zero when
/// `base_zero` is set.
pub fn random_vector_map<R: Rng>(
    rng: &mut R,
    src: &Arc<PointedMetricSpace>,
    k: usize,
    norm: NormTag,
    base_zero: bool,
) -> VectorMap {
    let values = (0..src.len())
        .map(|i| {
            (0..k)
                .map(|_| if base_zero && i == 0 { 0.0 } else { rng.random_range(-5.0..5.0) })
                .collect()
        })
        .collect();
    VectorMap::new(src.clone(), k, norm, values).expect("generated values are finite")
}

/// A sequence of length `1..=max_len` with entries anywhere in the space.
pub fn random_sequence<R: Rng>(rng: &mut R, space: &Arc<PointedMetricSpace>, max_len: usize) -> SequencePoint {
    let len = rng.random_range(1..=max_len.max(1));
    let idx = (0..len).map(|_| rng.random_range(0..space.len())).collect();
    SequencePoint::new(space.clone(), idx).expect("indices are in range")
}

/// Random points of `[-3, 3]^dim` plus the origin, closed under the radial
/// retraction: every point outside the unit ball brings its retraction.
pub fn retraction_closed_sample<R: Rng>(rng: &mut R, n: usize, dim: usize, norm: NormTag) -> Result<CoordSpace> {
    let mut pts: Vec<Vec<f64>> = vec![vec![0.0; dim]];
    while pts.len() < n.max(2) {
        let scale = if rng.random_bool(0.5) { 1.0 } else { 3.0 };
        let p: Vec<f64> = (0..dim).map(|_| rng.random_range(-scale..scale)).collect();
        if pts.iter().all(|q| norm.dist(&p, q) >= MIN_SEPARATION) {
            pts.push(p);
        }
    }
    let outside: Vec<Vec<f64>> = pts.iter().filter(|p| norm.norm(p) > 1.0).map(|p| radial_retract(p, norm)).collect();
    for g in outside {
        if pts.iter().all(|q| norm.dist(&g, q) > 0.0) {
            pts.push(g);
        }
    }
    let n = pts.len();
    CoordSpace::new(labels(n), 0, pts, norm)
}

/// A planar sample for the vanishing check: `x1 = (-a, 0)`, `x2 = (a, 0)`,
/// the origin as base, a few points on the bisector `{(0, y)}` and some
/// generic points. Returns the sample with the indices of `x1` and `x2`.
pub fn bisector_sample<R: Rng>(rng: &mut R, bisector: usize, generic: usize) -> (CoordSpace, usize, usize) {
    let a = rng.random_range(0.5..2.0);
    let mut pts = vec![vec![0.0, 0.0], vec![-a, 0.0], vec![a, 0.0]];
    while pts.len() < 3 + bisector {
        let y: f64 = rng.random_range(-3.0..3.0);
        if pts.iter().all(|q| NormTag::Two.dist(&[0.0, y], q) >= MIN_SEPARATION) {
            pts.push(vec![0.0, y]);
        }
    }
    while pts.len() < 3 + bisector + generic {
        let p: Vec<f64> = vec![rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
        // stay clear of the bisector so that the generic points really are off it
        if p[0].abs() >= MIN_SEPARATION && pts.iter().all(|q| NormTag::Two.dist(&p, q) >= MIN_SEPARATION) {
            pts.push(p);
        }
    }
    let n = pts.len();
    let c = CoordSpace::new(labels(n), 0, pts, NormTag::Two).expect("generated coordinates are valid");
    (c, 1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families_are_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..12 {
            assert!(cloud_space(&mut rng, n).validate().is_valid());
            assert!(abstract_space(&mut rng, n).validate().is_valid());
        }
    }

    #[test]
    fn sample_is_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for norm in [NormTag::One, NormTag::Two, NormTag::Sup] {
            let c = retraction_closed_sample(&mut rng, 6, 2, norm).unwrap();
            for i in 0..c.len() {
                let g = radial_retract(c.point(i), norm);
                assert!(c.find(&g, 1e-12).is_some());
            }
        }
    }
}
