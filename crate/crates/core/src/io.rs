// SPDX-License-Identifier: Apache-2.0

//! JSON file formats for spaces, maps, sampled functions and sequences.
//!
//! Space file, either a distance matrix or coordinates:
//!
//! ```json
//! {"labels": ["0", "a", "b"], "base": "0", "dist": [[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]]}
//! {"labels": ["o", "p"], "base": "o", "coords": [[0, 0], [1, 2]], "norm_tag": "two"}
//! ```
//!
//! Map file, between two spaces or into `ℝ^k`. Paths are relative to the map
//! file; table entries and `base` may be labels or file-order indices:
//!
//! ```json
//! {"src_ref": "m3.space.json", "dst_ref": "m3.space.json", "table": ["0", "b", "a"]}
//! {"src_ref": "m3.space.json", "k": 1, "norm_tag": "two", "values": [[3], [4], [-1]]}
//! ```
//!
//! Sampled real function: `{"grid": [...], "values": [...]}`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{
    induced_space, validate_space, CoordSpace, NormTag, PointMap, PointedMetricSpace, RealFunctionSample,
    ValidationReport, VectorMap, DEFAULT_TOL,
};

/// A point named by label or by its position in the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Index(usize),
    Label(String),
}

impl PointRef {
    fn resolve(&self, labels: &[String]) -> Result<usize> {
        match self {
            PointRef::Index(i) if *i < labels.len() => Ok(*i),
            PointRef::Index(i) => Err(Error::IndexOutOfRange { index: *i, len: labels.len() }),
            PointRef::Label(l) => labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub labels: Vec<String>,
    pub base: PointRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_tag: Option<NormTag>,
}

/// A loaded space; `coords` is present for coordinate files.
#[derive(Clone, Debug)]
pub struct LoadedSpace {
    pub space: Arc<PointedMetricSpace>,
    pub coords: Option<CoordSpace>,
    /// Labels in file order, for resolving file-order indices.
    pub file_labels: Vec<String>,
}

impl LoadedSpace {
    /// Canonical index of a point given in file terms.
    pub fn index(&self, r: &PointRef) -> Result<usize> {
        let i = r.resolve(&self.file_labels)?;
        self.space.index_of(&self.file_labels[i])
    }
}

impl SpaceFile {
    pub fn from_space(space: &PointedMetricSpace) -> Self {
        SpaceFile {
            labels: space.labels().to_vec(),
            base: PointRef::Label(space.label(0).to_string()),
            dist: Some(space.matrix().to_vec()),
            coords: None,
            norm_tag: None,
        }
    }

    pub fn from_coords(c: &CoordSpace) -> Self {
        SpaceFile {
            labels: c.labels().to_vec(),
            base: PointRef::Label(c.labels()[0].clone()),
            dist: None,
            coords: Some(c.coords().to_vec()),
            norm_tag: Some(c.norm_tag()),
        }
    }

    fn check_values(&self) -> Result<()> {
        if let Some(d) = &self.dist {
            for (i, row) in d.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if !v.is_finite() || *v < 0.0 {
                        return Err(Error::Invalid(format!("dist[{i}][{j}] = {v} is not a non-negative number")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Metric-axiom check on the raw file contents, before canonicalization.
    /// Indices in the report refer to file order.
    pub fn validate(&self) -> Result<ValidationReport> {
        self.check_values()?;
        match (&self.dist, &self.coords) {
            (Some(d), None) => validate_space(d, DEFAULT_TOL),
            (None, Some(_)) => {
                let c = self.coord_space()?;
                let n = c.len();
                let d: Vec<Vec<f64>> = (0..n)
                    .map(|i| (0..n).map(|j| c.norm_tag().dist(c.point(i), c.point(j))).collect())
                    .collect();
                // canonical order puts the base first; map back to file order
                let base = self.base.resolve(&self.labels)?;
                let mut file_order = vec![0; n];
                for (canon, fi) in std::iter::once(base).chain((0..n).filter(|&i| i != base)).enumerate() {
                    file_order[fi] = canon;
                }
                let d = (0..n)
                    .map(|i| (0..n).map(|j| d[file_order[i]][file_order[j]]).collect())
                    .collect::<Vec<Vec<f64>>>();
                validate_space(&d, DEFAULT_TOL)
            }
            _ => Err(Error::Invalid("space file needs exactly one of `dist` or `coords`".into())),
        }
    }

    fn coord_space(&self) -> Result<CoordSpace> {
        let coords = self.coords.clone().ok_or_else(|| Error::Invalid("missing coords".into()))?;
        let norm = self
            .norm_tag
            .ok_or_else(|| Error::Invalid("coordinate space needs `norm_tag`".into()))?;
        let base = self.base.resolve(&self.labels)?;
        CoordSpace::new(self.labels.clone(), base, coords, norm)
    }

    pub fn load(&self) -> Result<LoadedSpace> {
        self.check_values()?;
        let base = self.base.resolve(&self.labels)?;
        match (&self.dist, &self.coords) {
            (Some(d), None) => {
                if self.norm_tag.is_some() {
                    return Err(Error::Invalid("`norm_tag` only applies to coordinate spaces".into()));
                }
                let space = PointedMetricSpace::new(self.labels.clone(), base, d.clone())?;
                Ok(LoadedSpace {
                    space: Arc::new(space),
                    coords: None,
                    file_labels: self.labels.clone(),
                })
            }
            (None, Some(_)) => {
                let c = self.coord_space()?;
                let space = induced_space(&c)?;
                Ok(LoadedSpace {
                    space: Arc::new(space),
                    coords: Some(c),
                    file_labels: self.labels.clone(),
                })
            }
            _ => Err(Error::Invalid("space file needs exactly one of `dist` or `coords`".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapFile {
    Point {
        src_ref: String,
        dst_ref: String,
        table: Vec<PointRef>,
    },
    Vector {
        src_ref: String,
        k: usize,
        norm_tag: NormTag,
        values: Vec<Vec<f64>>,
    },
}

#[derive(Clone, Debug)]
pub enum LoadedMap {
    Point { map: PointMap, src: LoadedSpace, dst: LoadedSpace },
    Vector { map: VectorMap, src: LoadedSpace },
}

impl LoadedMap {
    pub fn src(&self) -> &LoadedSpace {
        match self {
            LoadedMap::Point { src, .. } | LoadedMap::Vector { src, .. } => src,
        }
    }
}

fn load_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Load {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| load_err(path, e))
}

pub fn parse_space_file(text: &str, path: &Path) -> Result<SpaceFile> {
    serde_json::from_str(text).map_err(|e| load_err(path, e))
}

pub fn read_space_file(path: &Path) -> Result<SpaceFile> {
    parse_space_file(&read(path)?, path)
}

pub fn load_space(path: &Path) -> Result<LoadedSpace> {
    read_space_file(path)?.load().map_err(|e| load_err(path, e))
}

fn resolve_ref(map_path: &Path, r: &str) -> PathBuf {
    let p = Path::new(r);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        map_path.parent().unwrap_or(Path::new(".")).join(p)
    }
}

/// Builds a map from its file description; `resolve` turns `src_ref` and
/// `dst_ref` into loaded spaces.
pub fn build_map(file: &MapFile, mut resolve: impl FnMut(&str) -> Result<LoadedSpace>) -> Result<LoadedMap> {
    match file {
        MapFile::Point { src_ref, dst_ref, table } => {
            let src = resolve(src_ref)?;
            let dst = resolve(dst_ref)?;
            if table.len() != src.file_labels.len() {
                return Err(Error::Invalid(format!(
                    "table has {} entries for {} source points",
                    table.len(),
                    src.file_labels.len()
                )));
            }
            let mut canon = vec![0; table.len()];
            for (fi, r) in table.iter().enumerate() {
                let target = dst.index(r)?;
                canon[src.space.index_of(&src.file_labels[fi])?] = target;
            }
            let map = PointMap::new(src.space.clone(), dst.space.clone(), canon)?;
            Ok(LoadedMap::Point { map, src, dst })
        }
        MapFile::Vector { src_ref, k, norm_tag, values } => {
            let src = resolve(src_ref)?;
            if values.len() != src.file_labels.len() {
                return Err(Error::Invalid(format!(
                    "{} values for {} source points",
                    values.len(),
                    src.file_labels.len()
                )));
            }
            let mut canon = vec![Vec::new(); values.len()];
            for (fi, v) in values.iter().enumerate() {
                canon[src.space.index_of(&src.file_labels[fi])?] = v.clone();
            }
            let map = VectorMap::new(src.space.clone(), *k, *norm_tag, canon)?;
            Ok(LoadedMap::Vector { map, src })
        }
    }
}

/// Parses a map file, reporting syntax errors with line and column and
/// shape errors with the offending field.
pub fn parse_map_file(text: &str, path: &Path) -> Result<MapFile> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct PointForm {
        src_ref: String,
        dst_ref: String,
        table: Vec<PointRef>,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct VectorForm {
        src_ref: String,
        k: usize,
        norm_tag: NormTag,
        values: Vec<Vec<f64>>,
    }
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| load_err(path, e))?;
    if value.get("table").is_some() {
        let f: PointForm = serde_json::from_value(value).map_err(|e| load_err(path, e))?;
        Ok(MapFile::Point { src_ref: f.src_ref, dst_ref: f.dst_ref, table: f.table })
    } else if value.get("values").is_some() {
        let f: VectorForm = serde_json::from_value(value).map_err(|e| load_err(path, e))?;
        Ok(MapFile::Vector { src_ref: f.src_ref, k: f.k, norm_tag: f.norm_tag, values: f.values })
    } else {
        Err(load_err(path, "map file needs either `table` or `values`"))
    }
}

pub fn load_map(path: &Path) -> Result<LoadedMap> {
    let file = parse_map_file(&read(path)?, path)?;
    build_map(&file, |r| load_space(&resolve_ref(path, r))).map_err(|e| match e {
        Error::Load { .. } => e,
        other => load_err(path, other),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleFile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn load_sample(path: &Path) -> Result<RealFunctionSample> {
    let f: SampleFile = serde_json::from_str(&read(path)?).map_err(|e| load_err(path, e))?;
    RealFunctionSample::new(f.grid, f.values).map_err(|e| load_err(path, e))
}

/// Map file contents for a point map between two referenced space files.
pub fn point_map_file(map: &PointMap, src_ref: &str, dst_ref: &str) -> MapFile {
    let dst = map.dst_space();
    MapFile::Point {
        src_ref: src_ref.to_string(),
        dst_ref: dst_ref.to_string(),
        table: map
            .table()
            .iter()
            .map(|&t| PointRef::Label(dst.label(t).to_string()))
            .collect(),
    }
}

pub fn vector_map_file(map: &VectorMap, src_ref: &str) -> MapFile {
    MapFile::Vector {
        src_ref: src_ref.to_string(),
        k: map.k(),
        norm_tag: map.norm_tag(),
        values: map.values().to_vec(),
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Comma-separated labels, as used for sequence literals on the command
/// line. An empty string is the zero sequence.
pub fn parse_label_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}
