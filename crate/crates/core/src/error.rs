use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library. Each variant maps onto a precondition of
/// one of the public operations, plus file I/O and parsing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("scale must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("percentile must lie in (0, 100], got {0}")]
    InvalidPercentile(f64),

    #[error("points have inconsistent dimensions: expected {expected}, found {found} at point {index}")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        index: usize,
    },

    #[error("points must have dimension at least 1")]
    ZeroDimension,

    #[error("coordinate {0} is not finite")]
    NonFiniteCoordinate(f64),

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("vertex {0} is not active")]
    Inactive(usize),

    #[error("a vertex cannot dominate itself ({0})")]
    SelfDomination(usize),

    #[error("sample size {k} out of range 1..={n}")]
    SampleSizeOutOfRange { k: usize, n: usize },

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("noise must be a non-negative finite standard deviation, got {0}")]
    InvalidNoise(f64),

    #[error("unknown shape {0:?}")]
    UnknownShape(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors that originate from reading or parsing files.
    pub fn is_io_or_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Io { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
