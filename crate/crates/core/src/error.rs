// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::metric::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("space has no points")]
    Empty,
    #[error("metric axioms violated: {0}")]
    InvalidMetric(ValidationReport),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("{0} must be positive, got {1}")]
    Domain(&'static str, f64),
    #[error("map does not send the base point to the base point (image at distance {0} from base)")]
    BaseNotPreserved(f64),
    #[error("maps or sequences live on different spaces")]
    SpaceMismatch,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("{points} free coordinates exceed the vertex cap of {cap}; use the closed forms")]
    Capacity { points: usize, cap: usize },
    #[error("retraction of point(s) {0:?} missing from the ball sample")]
    NotRetractionClosed(Vec<usize>),
    #[error("{path}: {msg}")]
    Load { path: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
