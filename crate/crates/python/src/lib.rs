// SPDX-License-Identifier: Apache-2.0

//! Python bindings. Points are addressed by label throughout.

use std::path::Path;
use std::sync::Arc;

use extlip::dual::{adjoint, adjoint_norm, dual_distance, dual_distance_oracle, lambda_norm};
use extlip::extbound::{de_distance, e_constant};
use extlip::metric::{induced_space, CoordSpace, Mapping, NormTag, PointedMetricSpace, DEFAULT_TOL};
use extlip::moduli::{lip_at, lip_const, norm_lx, omega};
use extlip::sequences::{dilate, dp_distance, PNorm, SequencePoint};
use extlip::suite::SuiteConfig;
use extlip::transfer::{phi, phi_inv};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

const VERTEX_CAP: usize = 20;

fn err(e: extlip::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn norm_tag(name: &str) -> PyResult<NormTag> {
    match name {
        "one" | "1" => Ok(NormTag::One),
        "two" | "2" => Ok(NormTag::Two),
        "sup" | "inf" => Ok(NormTag::Sup),
        _ => Err(PyValueError::new_err(format!("unknown norm `{name}`; use one, two or sup"))),
    }
}

fn index(space: &PointedMetricSpace, label: &str) -> PyResult<usize> {
    space.index_of(label).map_err(err)
}

fn sequence(space: &Arc<PointedMetricSpace>, labels: Vec<String>) -> PyResult<SequencePoint> {
    SequencePoint::from_labels(space.clone(), &labels).map_err(err)
}

/// A finite pointed metric space. The base point always comes first.
#[pyclass(module = "pyextlip", frozen)]
struct MetricSpace {
    inner: Arc<PointedMetricSpace>,
}

#[pymethods]
impl MetricSpace {
    #[new]
    #[pyo3(signature = (dist, labels=None, base=0))]
    fn new(dist: Vec<Vec<f64>>, labels: Option<Vec<String>>, base: usize) -> PyResult<Self> {
        let space = match labels {
            Some(l) => PointedMetricSpace::new(l, base, dist),
            None if base == 0 => PointedMetricSpace::from_matrix(dist),
            None => Err(extlip::Error::Invalid("a non-zero base needs labels".into())),
        };
        Ok(MetricSpace { inner: Arc::new(space.map_err(err)?) })
    }

    /// Loads a `.space.json` file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let loaded = extlip::io::load_space(Path::new(path)).map_err(err)?;
        Ok(MetricSpace { inner: loaded.space })
    }

    /// A built-in space: `m3` or `plane4`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        extlip::corpus::named_space(name)
            .map(|inner| MetricSpace { inner })
            .ok_or_else(|| PyValueError::new_err(format!("no built-in space `{name}`")))
    }

    /// The metric induced on points of ℝ^k; `coords[0]` must be the origin.
    #[staticmethod]
    #[pyo3(signature = (coords, norm="two"))]
    fn from_coords(coords: Vec<Vec<f64>>, norm: &str) -> PyResult<Self> {
        let c = CoordSpace::from_coords(coords, norm_tag(norm)?).map_err(err)?;
        Ok(MetricSpace { inner: Arc::new(induced_space(&c).map_err(err)?) })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("MetricSpace(labels={:?})", self.inner.labels())
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn base(&self) -> String {
        self.inner.label(0).to_string()
    }

    fn d(&self, x: &str, y: &str) -> PyResult<f64> {
        Ok(self.inner.d(index(&self.inner, x)?, index(&self.inner, y)?))
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        self.inner.matrix().to_vec()
    }

    /// Distance between evaluation functionals; `y` defaults to the base.
    #[pyo3(signature = (x, y=None, oracle=false))]
    fn dual_distance(&self, x: &str, y: Option<&str>, oracle: bool) -> PyResult<f64> {
        let xi = index(&self.inner, x)?;
        let yi = match y {
            Some(y) => index(&self.inner, y)?,
            None => 0,
        };
        if oracle {
            dual_distance_oracle(&self.inner, xi, yi, VERTEX_CAP).map_err(err)
        } else {
            dual_distance(&self.inner, xi, yi).map_err(err)
        }
    }

    /// `d_p` between two finite sequences of labels. Returns the distance
    /// and an attaining unit-ball vertex as a label-to-value dict.
    fn dp(&self, p: f64, s: Vec<String>, t: Vec<String>) -> PyResult<(f64, Vec<(String, f64)>)> {
        let p = PNorm::new(p).map_err(err)?;
        let v = dp_distance(p, &sequence(&self.inner, s)?, &sequence(&self.inner, t)?, VERTEX_CAP).map_err(err)?;
        Ok((v.value, v.witness.labelled()))
    }
}

fn lip_at_label<F: Mapping>(f: &F, x: &str) -> PyResult<f64> {
    Ok(lip_at(f, index(f.src(), x)?).map_err(err)?.value)
}

/// A map between two pointed metric spaces, given as a label table.
#[pyclass(module = "pyextlip", frozen)]
struct PointMap {
    inner: extlip::metric::PointMap,
}

#[pymethods]
impl PointMap {
    #[new]
    fn new(src: &MetricSpace, dst: &MetricSpace, table: Vec<String>) -> PyResult<Self> {
        let idx = table
            .iter()
            .map(|l| index(&dst.inner, l))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = extlip::metric::PointMap::new(src.inner.clone(), dst.inner.clone(), idx).map_err(err)?;
        Ok(PointMap { inner })
    }

    #[staticmethod]
    fn identity(space: &MetricSpace) -> Self {
        PointMap { inner: extlip::metric::PointMap::identity(space.inner.clone()) }
    }

    #[getter]
    fn table(&self) -> Vec<String> {
        let dst = self.inner.dst_space();
        self.inner.table().iter().map(|&j| dst.label(j).to_string()).collect()
    }

    fn then(&self, next: &PointMap) -> PyResult<PointMap> {
        Ok(PointMap { inner: self.inner.then(&next.inner).map_err(err)? })
    }

    fn lip_const(&self) -> f64 {
        lip_const(&self.inner).value
    }

    fn lip_at(&self, x: &str) -> PyResult<f64> {
        lip_at_label(&self.inner, x)
    }

    fn omega(&self, t: f64) -> PyResult<f64> {
        Ok(omega(&self.inner, t).map_err(err)?.value)
    }

    #[pyo3(signature = (tol=DEFAULT_TOL))]
    fn e_constant(&self, tol: f64) -> PyResult<f64> {
        Ok(e_constant(&self.inner, tol).map_err(err)?.value)
    }

    #[pyo3(signature = (other, tol=DEFAULT_TOL))]
    fn de(&self, other: &PointMap, tol: f64) -> PyResult<f64> {
        Ok(de_distance(&self.inner, &other.inner, tol).map_err(err)?.value)
    }

    /// Adjoint on the duals as a matrix over the non-base points.
    fn adjoint_matrix(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(adjoint(&self.inner).map_err(err)?.entries)
    }

    /// Adjoint operator norm: the closed form and, when the target is small
    /// enough, the vertex-search value.
    fn adjoint_norm(&self) -> PyResult<(f64, Option<f64>)> {
        let n = adjoint_norm(&self.inner, VERTEX_CAP).map_err(err)?;
        Ok((n.closed_form, n.oracle))
    }

    /// Applies the map termwise to a sequence of labels.
    fn dilate(&self, s: Vec<String>) -> PyResult<Vec<String>> {
        let s = sequence(self.inner.src_space(), s)?;
        Ok(dilate(&self.inner, &s).map_err(err)?.labels())
    }
}

/// A map from a pointed metric space into (ℝ^k, norm).
#[pyclass(module = "pyextlip", frozen)]
struct VectorMap {
    inner: extlip::metric::VectorMap,
}

#[pymethods]
impl VectorMap {
    /// `values[i]` is the image of the i-th point in `src.labels` order.
    #[new]
    #[pyo3(signature = (src, values, norm="two"))]
    fn new(src: &MetricSpace, values: Vec<Vec<f64>>, norm: &str) -> PyResult<Self> {
        let k = values.first().map_or(0, Vec::len);
        let inner = extlip::metric::VectorMap::new(src.inner.clone(), k, norm_tag(norm)?, values).map_err(err)?;
        Ok(VectorMap { inner })
    }

    #[getter]
    fn values(&self) -> Vec<Vec<f64>> {
        self.inner.values().to_vec()
    }

    #[getter]
    fn norm(&self) -> &'static str {
        self.inner.norm_tag().as_str()
    }

    fn lip_const(&self) -> f64 {
        lip_const(&self.inner).value
    }

    fn lip_at(&self, x: &str) -> PyResult<f64> {
        lip_at_label(&self.inner, x)
    }

    fn norm_lx(&self, x: &str) -> PyResult<f64> {
        norm_lx(&self.inner, index(self.inner.src_space(), x)?).map_err(err)
    }

    #[pyo3(signature = (tol=DEFAULT_TOL))]
    fn e_constant(&self, tol: f64) -> PyResult<f64> {
        Ok(e_constant(&self.inner, tol).map_err(err)?.value)
    }

    #[pyo3(signature = (other, tol=DEFAULT_TOL))]
    fn de(&self, other: &VectorMap, tol: f64) -> PyResult<f64> {
        Ok(de_distance(&self.inner, &other.inner, tol).map_err(err)?.value)
    }

    /// `x' ↦ d(x', x)·h(x') + h(x)`.
    fn phi(&self, x: &str) -> PyResult<VectorMap> {
        let xi = index(self.inner.src_space(), x)?;
        Ok(VectorMap { inner: phi(xi, &self.inner).map_err(err)? })
    }

    fn phi_inv(&self, x: &str) -> PyResult<VectorMap> {
        let xi = index(self.inner.src_space(), x)?;
        Ok(VectorMap { inner: phi_inv(xi, &self.inner).map_err(err)? })
    }

    /// Both sides of the isometry onto operators into the dual of
    /// (ℝ^k, q): the e-norm of the map and the operator norm.
    #[pyo3(signature = (q="two", tol=DEFAULT_TOL))]
    fn lambda_norm(&self, q: &str, tol: f64) -> PyResult<(f64, f64)> {
        let n = lambda_norm(&self.inner, norm_tag(q)?, tol).map_err(err)?;
        Ok((n.t_e_norm, n.lambda_opnorm))
    }
}

/// Runs the randomized property suite and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (seed=0, only=None, config=None))]
fn run_suite(seed: u64, only: Option<Vec<String>>, config: Option<&str>) -> PyResult<String> {
    let mut cfg: SuiteConfig = match config {
        Some(text) => serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        None => SuiteConfig { seed, ..Default::default() },
    };
    if let Some(only) = only {
        cfg.only = only;
    }
    cfg.validate().map_err(err)?;
    Ok(extlip::suite::run_suite(&cfg).map_err(err)?.to_json())
}

/// Recomputes the named reference fixtures (all of them by default) and
/// returns the JSON report.
#[pyfunction]
#[pyo3(signature = (names=None))]
fn run_corpus(names: Option<Vec<String>>) -> PyResult<String> {
    let names = names.unwrap_or_default();
    Ok(extlip::corpus::run_corpus(&names).map_err(err)?.to_json())
}

#[pymodule]
fn pyextlip(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<MetricSpace>()?;
    m.add_class::<PointMap>()?;
    m.add_class::<VectorMap>()?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(run_corpus, m)?)?;
    m.add("DEFAULT_TOL", DEFAULT_TOL)?;
    Ok(())
}
