use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid cycle type: {0}")]
    InvalidCycleType(String),

    #[error("cannot parse cycle notation {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("permutation {0} is not in canonical cycle form")]
    NotCanonical(String),

    #[error("unsupported degree {n}: {reason}")]
    UnsupportedDegree { n: usize, reason: &'static str },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("eigensolver did not converge after {iterations} iterations; {remaining} eigenvalues unresolved")]
    NoConvergence {
        iterations: usize,
        remaining: usize,
        /// Hessenberg state at the point of failure, row-major.
        partial: Vec<f64>,
    },

    #[error("eigensolver failed on class {class_index}: {source}")]
    ClassFailed {
        class_index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no sign change of the signed distance along the tracked branch")]
    NoSignChange,

    #[error("checkpoint {path:?} was written for config {found}, current config is {expected}")]
    CheckpointMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("malformed checkpoint {path:?}: {reason}")]
    CheckpointCorrupt { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
