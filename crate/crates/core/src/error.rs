use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{0} contains no edges")]
    EmptyInput(PathBuf),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("label dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("cannot add {requested} edges: only {available} non-adjacent pairs remain")]
    EdgeCapacity { requested: usize, available: usize },

    #[error("zero-norm embedding for node {0}")]
    ZeroNorm(usize),

    #[error("non-finite gradient in slot {slot} at step {step}")]
    NonFiniteGradient { slot: usize, step: u64 },

    #[error("empty {0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
