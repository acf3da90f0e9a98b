use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error(
        "cannot 3-colour a {lx}x{ly} honeycomb torus: both dimensions must be multiples of 3 \
         (plaquette colour (q + 2r) mod 3 must be periodic)"
    )]
    ColoringObstruction { lx: usize, ly: usize },

    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("region does not fit on the torus: {0}")]
    RegionTooLarge(String),

    #[error("plaquette set is not contractible: {0}")]
    NonContractible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dense oracle limited to {max} qubits, state has {n}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("dense oracle: {0}")]
    Oracle(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error at {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
