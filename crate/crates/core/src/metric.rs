// SPDX-License-Identifier: Apache-2.0

//! Finite pointed metric spaces, the maps between them, and sampled real
//! functions.
//!
//! Every space keeps its distinguished point at index 0. Constructors take
//! the base index of the caller's ordering and move that point to the front,
//! keeping the relative order of the remaining points.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used by every approximate comparison unless overridden.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Norm carried by `ℝ^k` targets and coordinate samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormTag {
    One,
    Two,
    Sup,
}

impl NormTag {
    pub fn norm(self, v: &[f64]) -> f64 {
        match self {
            NormTag::One => v.iter().map(|x| x.abs()).sum(),
            NormTag::Two => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormTag::Sup => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    pub fn dist(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            NormTag::One => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            NormTag::Two => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            NormTag::Sup => a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs())),
        }
    }

    /// The conjugate norm: ℓ1 and ℓ∞ are dual to each other, ℓ2 to itself.
    pub fn dual(self) -> NormTag {
        match self {
            NormTag::One => NormTag::Sup,
            NormTag::Two => NormTag::Two,
            NormTag::Sup => NormTag::One,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NormTag::One => "one",
            NormTag::Two => "two",
            NormTag::Sup => "sup",
        }
    }
}

impl fmt::Display for NormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "1" | "l1" => Ok(NormTag::One),
            "two" | "2" | "l2" => Ok(NormTag::Two),
            "sup" | "inf" | "linf" => Ok(NormTag::Sup),
            other => Err(Error::Invalid(format!(
                "unsupported norm tag `{other}` (expected one, two or sup)"
            ))),
        }
    }
}

/// A single failed metric axiom together with the indices witnessing it.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum Violation {
    NotFinite { i: usize, j: usize },
    NonzeroDiagonal { i: usize, value: f64 },
    Asymmetric { i: usize, j: usize, dij: f64, dji: f64 },
    NonPositive { i: usize, j: usize, value: f64 },
    /// `d(i, j) > d(i, k) + d(k, j)`.
    Triangle { i: usize, k: usize, j: usize, direct: f64, via: f64 },
}

impl Violation {
    pub fn describe(&self, labels: &[String]) -> String {
        let l = |i: &usize| labels.get(*i).cloned().unwrap_or_else(|| i.to_string());
        match self {
            Violation::NotFinite { i, j } => format!("d({}, {}) is not finite", l(i), l(j)),
            Violation::NonzeroDiagonal { i, value } => {
                format!("d({0}, {0}) = {value} is not zero", l(i))
            }
            Violation::Asymmetric { i, j, dij, dji } => {
                format!("symmetry: d({}, {}) = {dij} but d({}, {}) = {dji}", l(i), l(j), l(j), l(i))
            }
            Violation::NonPositive { i, j, value } => {
                format!("separation: d({}, {}) = {value} for distinct points", l(i), l(j))
            }
            Violation::Triangle { i, k, j, direct, via } => format!(
                "triangle at ({}, {}, {}): d({}, {}) = {direct} > {via}",
                l(i),
                l(k),
                l(j),
                l(i),
                l(j)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = Vec::new();
        let parts: Vec<String> = self.violations.iter().map(|v| v.describe(&labels)).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks the metric axioms on a raw distance matrix.
///
/// Diagonal and separation are checked exactly; symmetry and the triangle
/// inequality allow `tol` of rounding slack.
pub fn validate_space(dist: &[Vec<f64>], tol: f64) -> Result<ValidationReport> {
    let n = dist.len();
    for (row, r) in dist.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
    }
    let mut violations = Vec::new();
    let mut finite = true;
    for i in 0..n {
        for j in 0..n {
            if !dist[i][j].is_finite() {
                violations.push(Violation::NotFinite { i, j });
                finite = false;
            }
        }
    }
    if !finite {
        return Ok(ValidationReport { violations });
    }
    for i in 0..n {
        if dist[i][i] != 0.0 {
            violations.push(Violation::NonzeroDiagonal { i, value: dist[i][i] });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (dij, dji) = (dist[i][j], dist[j][i]);
            if (dij - dji).abs() > tol {
                violations.push(Violation::Asymmetric { i, j, dij, dji });
            }
            if dij <= 0.0 || dji <= 0.0 {
                violations.push(Violation::NonPositive { i, j, value: dij.min(dji) });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let via = dist[i][k] + dist[k][j];
                if dist[i][j] > via + tol {
                    violations.push(Violation::Triangle {
                        i,
                        k,
                        j,
                        direct: dist[i][j],
                        via,
                    });
                }
            }
        }
    }
    Ok(ValidationReport { violations })
}

/// Finite metric space with a distinguished point at index 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointedMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl PointedMetricSpace {
    /// Builds a space from labels, the index of the base point in that
    /// ordering, and the distance matrix. The base point is moved to index 0.
    pub fn new(labels: Vec<String>, base: usize, dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if labels.len() != n {
            return Err(Error::Invalid(format!(
                "{} labels for {n} points",
                labels.len()
            )));
        }
        if base >= n {
            return Err(Error::IndexOutOfRange { index: base, len: n });
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(prev) = seen.insert(l.as_str(), i) {
                return Err(Error::Invalid(format!(
                    "duplicate label `{l}` at positions {prev} and {i}"
                )));
            }
        }
        let report = validate_space(&dist, DEFAULT_TOL)?;
        if !report.is_valid() {
            return Err(Error::InvalidMetric(report));
        }
        let order = base_first_order(n, base);
        let labels = order.iter().map(|&i| labels[i].clone()).collect();
        let dist = order
            .iter()
            .map(|&i| order.iter().map(|&j| dist[i][j]).collect())
            .collect();
        Ok(PointedMetricSpace { labels, dist })
    }

    /// Space whose points are labelled `0, p1, p2, …` with index 0 as base.
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Result<Self> {
        let labels = default_labels(dist.len());
        Self::new(labels, 0, dist)
    }

    pub fn singleton() -> Self {
        PointedMetricSpace {
            labels: vec!["0".to_string()],
            dist: vec![vec![0.0]],
        }
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    /// Always false; a pointed space holds at least its base point.
    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn base(&self) -> usize {
        0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// `d(i, 0)`.
    #[inline]
    pub fn norm(&self, i: usize) -> f64 {
        self.dist[i][0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, len: self.len() })
        }
    }

    /// Indices of the non-base points, `1..len`.
    pub fn non_base(&self) -> std::ops::Range<usize> {
        1..self.len()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_space(&self.dist, DEFAULT_TOL).expect("stored matrices are square")
    }
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if i == 0 { "0".to_string() } else { format!("p{i}") })
        .collect()
}

fn base_first_order(n: usize, base: usize) -> Vec<usize> {
    std::iter::once(base).chain((0..n).filter(|&i| i != base)).collect()
}

/// Points of `ℝ^d` under one of the norms in [`NormTag`]; the base point is
/// the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoordSpace {
    labels: Vec<String>,
    coords: Vec<Vec<f64>>,
    norm: NormTag,
}

impl CoordSpace {
    pub fn new(labels: Vec<String>, base: usize, coords: Vec<Vec<f64>>, norm: NormTag) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if labels.len() != n {
            return Err(Error::Invalid(format!("{} labels for {n} points", labels.len())));
        }
        if base >= n {
            return Err(Error::IndexOutOfRange { index: base, len: n });
        }
        let dim = coords[0].len();
        for (i, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::Invalid(format!(
                    "point {i} has dimension {}, expected {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid(format!("point {i} has a non-finite coordinate")));
            }
        }
        if coords[base].iter().any(|&x| x != 0.0) {
            return Err(Error::Invalid(format!(
                "base point `{}` is not the origin",
                labels[base]
            )));
        }
        let order = base_first_order(n, base);
        Ok(CoordSpace {
            labels: order.iter().map(|&i| labels[i].clone()).collect(),
            coords: order.iter().map(|&i| coords[i].clone()).collect(),
            norm,
        })
    }

    /// Unlabelled constructor; `coords[0]` must be the origin.
    pub fn from_coords(coords: Vec<Vec<f64>>, norm: NormTag) -> Result<Self> {
        let labels = default_labels(coords.len());
        Self::new(labels, 0, coords, norm)
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.coords[0].len()
    }

    pub fn norm_tag(&self) -> NormTag {
        self.norm
    }

    pub fn coords(&self) -> &[Vec<f64>] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn point_norm(&self, i: usize) -> f64 {
        self.norm.norm(&self.coords[i])
    }

    /// Position of a point within `tol` of `x` (lowest index wins).
    pub fn find(&self, x: &[f64], tol: f64) -> Option<usize> {
        self.coords.iter().position(|c| self.norm.dist(c, x) <= tol)
    }
}

/// Metric space induced by the coordinate norm.
pub fn induced_space(c: &CoordSpace) -> Result<PointedMetricSpace> {
    let n = c.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = c.norm.dist(&c.coords[i], &c.coords[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    PointedMetricSpace::new(c.labels.clone(), 0, dist)
}

/// A coordinate sample cut down to the closed unit ball.
#[derive(Clone, Debug, PartialEq)]
pub struct BallRestriction {
    pub ball: CoordSpace,
    /// `parent[i]` is the index in the original sample of ball point `i`.
    pub parent: Vec<usize>,
}

/// Keeps exactly the points of norm at most 1; the origin always survives.
pub fn restrict_to_ball(c: &CoordSpace) -> BallRestriction {
    let parent: Vec<usize> = (0..c.len()).filter(|&i| i == 0 || c.point_norm(i) <= 1.0).collect();
    let ball = CoordSpace {
        labels: parent.iter().map(|&i| c.labels[i].clone()).collect(),
        coords: parent.iter().map(|&i| c.coords[i].clone()).collect(),
        norm: c.norm,
    };
    BallRestriction { ball, parent }
}

/// What the moduli and e-norm computations need from a map: the source
/// space and distances between images.
pub trait Mapping {
    fn src(&self) -> &PointedMetricSpace;

    /// Distance between the images of `i` and `j`.
    fn image_dist(&self, i: usize, j: usize) -> f64;

    /// Distance from the image of `i` to the target's base point (or zero).
    fn image_norm(&self, i: usize) -> f64;

    /// Distance between the image of `i` under `self` and under `other`.
    fn cross_dist(&self, other: &Self, i: usize) -> f64;

    /// True when `other` has the same source and target as `self`.
    fn same_spaces(&self, other: &Self) -> bool;
}

pub(crate) fn same_space(a: &Arc<PointedMetricSpace>, b: &Arc<PointedMetricSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A map between finite pointed spaces, stored as an index table.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMap {
    src: Arc<PointedMetricSpace>,
    dst: Arc<PointedMetricSpace>,
    table: Vec<usize>,
}

impl PointMap {
    pub fn new(src: Arc<PointedMetricSpace>, dst: Arc<PointedMetricSpace>, table: Vec<usize>) -> Result<Self> {
        if table.len() != src.len() {
            return Err(Error::Invalid(format!(
                "map table has {} entries for {} source points",
                table.len(),
                src.len()
            )));
        }
        for &t in &table {
            dst.check_index(t)?;
        }
        Ok(PointMap { src, dst, table })
    }

    pub fn identity(space: Arc<PointedMetricSpace>) -> Self {
        let table = (0..space.len()).collect();
        PointMap {
            src: space.clone(),
            dst: space,
            table,
        }
    }

    /// The map sending every point to the base of `dst`.
    pub fn constant_base(src: Arc<PointedMetricSpace>, dst: Arc<PointedMetricSpace>) -> Self {
        let table = vec![0; src.len()];
        PointMap { src, dst, table }
    }

    pub fn src_space(&self) -> &Arc<PointedMetricSpace> {
        &self.src
    }

    pub fn dst_space(&self) -> &Arc<PointedMetricSpace> {
        &self.dst
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn preserves_base(&self) -> bool {
        self.table[0] == 0
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PointMap) -> Result<PointMap> {
        if !same_space(&self.dst, &next.src) {
            return Err(Error::SpaceMismatch);
        }
        Ok(PointMap {
            src: self.src.clone(),
            dst: next.dst.clone(),
            table: self.table.iter().map(|&t| next.table[t]).collect(),
        })
    }
}

impl Mapping for PointMap {
    fn src(&self) -> &PointedMetricSpace {
        &self.src
    }

    fn image_dist(&self, i: usize, j: usize) -> f64 {
        self.dst.d(self.table[i], self.table[j])
    }

    fn image_norm(&self, i: usize) -> f64 {
        self.dst.norm(self.table[i])
    }

    fn cross_dist(&self, other: &Self, i: usize) -> f64 {
        self.dst.d(self.table[i], other.table[i])
    }

    fn same_spaces(&self, other: &Self) -> bool {
        same_space(&self.src, &other.src) && same_space(&self.dst, &other.dst)
    }
}

/// A map from a finite pointed space into `ℝ^k` with a chosen norm.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorMap {
    src: Arc<PointedMetricSpace>,
    norm: NormTag,
    values: Vec<Vec<f64>>,
    k: usize,
}

impl VectorMap {
    pub fn new(src: Arc<PointedMetricSpace>, k: usize, norm: NormTag, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != src.len() {
            return Err(Error::Invalid(format!(
                "{} values for {} source points",
                values.len(),
                src.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if v.len() != k {
                return Err(Error::Invalid(format!(
                    "value at point {i} has dimension {}, expected {k}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid(format!("value at point {i} is not finite")));
            }
        }
        Ok(VectorMap { src, norm, values, k })
    }

    /// Real-valued map (`k = 1`).
    pub fn scalar(src: Arc<PointedMetricSpace>, values: &[f64]) -> Result<Self> {
        Self::new(src, 1, NormTag::Two, values.iter().map(|&v| vec![v]).collect())
    }

    pub fn zeros(src: Arc<PointedMetricSpace>, k: usize, norm: NormTag) -> Self {
        let values = vec![vec![0.0; k]; src.len()];
        VectorMap { src, norm, values, k }
    }

    pub fn src_space(&self) -> &Arc<PointedMetricSpace> {
        &self.src
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn norm_tag(&self) -> NormTag {
        self.norm
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    /// Same source and norm, new values.
    pub fn with_values(&self, values: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(self.src.clone(), self.k, self.norm, values)
    }

    /// `max_x ‖f(x)‖`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(self.norm.norm(v)))
    }

    /// `alpha·self + beta·other`.
    pub fn combine(&self, alpha: f64, other: &VectorMap, beta: f64) -> Result<Self> {
        if !same_space(&self.src, &other.src) || self.k != other.k || self.norm != other.norm {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect())
            .collect();
        Ok(VectorMap {
            src: self.src.clone(),
            norm: self.norm,
            values,
            k: self.k,
        })
    }

    pub fn scale(&self, alpha: f64) -> Self {
        VectorMap {
            src: self.src.clone(),
            norm: self.norm,
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|x| alpha * x).collect())
                .collect(),
            k: self.k,
        }
    }

    /// Largest coordinate-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &VectorMap) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

impl Mapping for VectorMap {
    fn src(&self) -> &PointedMetricSpace {
        &self.src
    }

    fn image_dist(&self, i: usize, j: usize) -> f64 {
        self.norm.dist(&self.values[i], &self.values[j])
    }

    fn image_norm(&self, i: usize) -> f64 {
        self.norm.norm(&self.values[i])
    }

    fn cross_dist(&self, other: &Self, i: usize) -> f64 {
        self.norm.dist(&self.values[i], &other.values[i])
    }

    fn same_spaces(&self, other: &Self) -> bool {
        same_space(&self.src, &other.src) && self.k == other.k && self.norm == other.norm
    }
}

/// A real function sampled on a finite grid of the real line containing 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealFunctionSample {
    grid: Vec<f64>,
    values: Vec<f64>,
    base: usize,
}

impl RealFunctionSample {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Invalid(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(Error::Invalid("grid and values must be finite".into()));
        }
        if let Some(w) = grid.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!(
                "grid is not strictly increasing at position {}",
                w + 1
            )));
        }
        let base = grid
            .iter()
            .position(|&x| x == 0.0)
            .ok_or_else(|| Error::Invalid("grid does not contain 0.0".into()))?;
        Ok(RealFunctionSample { grid, values, base })
    }

    pub fn from_fn(grid: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn base(&self) -> usize {
        self.base
    }
}

/// `points` equally spaced values from `lo` to `hi` inclusive, with 0.0
/// inserted when it lies in range but is not hit exactly.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && lo < hi, "uniform_grid needs lo < hi and at least two points");
    let last = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { hi } else { lo + (hi - lo) * (i as f64 / last) })
        .collect();
    if lo <= 0.0 && hi >= 0.0 && !grid.contains(&0.0) {
        let pos = grid.partition_point(|&x| x < 0.0);
        grid.insert(pos, 0.0);
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn m3_matrix(dab: f64) -> Vec<Vec<f64>> {
        vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, dab], vec![2.0, dab, 0.0]]
    }

    #[test]
    fn m3_is_valid() {
        let r = validate_space(&m3_matrix(1.5), DEFAULT_TOL).unwrap();
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn triangle_violation_names_witness() {
        let r = validate_space(&m3_matrix(5.0), DEFAULT_TOL).unwrap();
        assert_eq!(r.violations.len(), 1);
        match &r.violations[0] {
            Violation::Triangle { i, k, j, .. } => assert_eq!((*i, *k, *j), (1, 0, 2)),
            v => panic!("unexpected {v:?}"),
        }
        let labels: Vec<String> = ["0", "a", "b"].iter().map(|s| s.to_string()).collect();
        assert!(r.violations[0].describe(&labels).contains("(a, 0, b)"));
    }

    #[test]
    fn singleton_is_valid() {
        assert!(validate_space(&[vec![0.0]], DEFAULT_TOL).unwrap().is_valid());
        assert!(PointedMetricSpace::singleton().validate().is_valid());
    }

    #[test]
    fn non_square_is_structural_error() {
        let err = validate_space(&[vec![0.0, 1.0], vec![1.0]], DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, Error::NotSquare { row: 1, .. }));
    }

    #[test]
    fn other_axioms_reported() {
        let r = validate_space(&[vec![0.5, 1.0], vec![2.0, 0.0]], DEFAULT_TOL).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::NonzeroDiagonal { i: 0, .. })));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Asymmetric { .. })));
        let r = validate_space(&[vec![0.0, 0.0], vec![0.0, 0.0]], DEFAULT_TOL).unwrap();
        assert!(matches!(r.violations[0], Violation::NonPositive { .. }));
        let r = validate_space(&[vec![0.0, f64::NAN], vec![1.0, 0.0]], DEFAULT_TOL).unwrap();
        assert!(matches!(r.violations[0], Violation::NotFinite { i: 0, j: 1 }));
    }

    #[test]
    fn base_is_moved_to_front() {
        let labels = vec!["a".to_string(), "0".to_string(), "b".to_string()];
        // original order a, 0, b
        let dist = vec![vec![0.0, 1.0, 1.5], vec![1.0, 0.0, 2.0], vec![1.5, 2.0, 0.0]];
        let s = PointedMetricSpace::new(labels, 1, dist).unwrap();
        assert_eq!(s.labels(), ["0", "a", "b"]);
        assert_eq!(s.d(0, 2), 2.0);
        assert_eq!(s.d(1, 2), 1.5);
    }

    #[test]
    fn induced_distances() {
        let coords = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]];
        let two = induced_space(&CoordSpace::from_coords(coords.clone(), NormTag::Two).unwrap()).unwrap();
        assert!((two.d(1, 2) - 5f64.sqrt()).abs() < 1e-15);
        let sup = induced_space(&CoordSpace::from_coords(coords.clone(), NormTag::Sup).unwrap()).unwrap();
        assert_eq!(sup.d(1, 2), 2.0);
        let one = induced_space(&CoordSpace::from_coords(coords, NormTag::One).unwrap()).unwrap();
        assert_eq!(one.d(1, 2), 3.0);
    }

    #[test]
    fn nonzero_base_coordinates_rejected() {
        let err = CoordSpace::from_coords(vec![vec![1.0], vec![0.0]], NormTag::Two).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }

    #[test]
    fn ball_restriction() {
        let c = CoordSpace::from_coords(vec![vec![0.0], vec![0.5], vec![1.0], vec![2.0]], NormTag::Two).unwrap();
        let r = restrict_to_ball(&c);
        assert_eq!(r.parent, vec![0, 1, 2]);
        let again = restrict_to_ball(&r.ball);
        assert_eq!(again.ball, r.ball);

        let inside = CoordSpace::from_coords(vec![vec![0.0], vec![0.3], vec![-1.0]], NormTag::Sup).unwrap();
        assert_eq!(restrict_to_ball(&inside).ball, inside);

        let far = CoordSpace::from_coords(vec![vec![0.0], vec![3.0], vec![-4.0]], NormTag::One).unwrap();
        assert_eq!(restrict_to_ball(&far).ball.len(), 1);
    }

    #[test]
    fn grids_contain_zero() {
        let g = uniform_grid(-1.0, 1.0, 4);
        assert!(g.contains(&0.0));
        assert_eq!(g.len(), 5);
        let g = uniform_grid(0.0, 1.0, 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 1.0);
        assert!(RealFunctionSample::from_fn(g, |x| x).is_ok());
        assert!(RealFunctionSample::new(vec![1.0, 2.0], vec![0.0, 0.0]).is_err());
        assert!(RealFunctionSample::new(vec![0.0, 0.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn composition_and_tables() {
        let m3 = Arc::new(PointedMetricSpace::from_matrix(m3_matrix(1.5)).unwrap());
        let swap = PointMap::new(m3.clone(), m3.clone(), vec![0, 2, 1]).unwrap();
        let id = swap.then(&swap).unwrap();
        assert_eq!(id.table(), PointMap::identity(m3.clone()).table());
        assert!(PointMap::new(m3.clone(), m3, vec![0, 3, 1]).is_err());
    }
}
