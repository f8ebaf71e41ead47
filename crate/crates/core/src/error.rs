use thiserror::Error;

/// Errors raised by the planning library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid configuration space: {0}")]
    InvalidSpace(String),
    #[error("interpolation parameter {0} outside [0, 1]")]
    InvalidInterpolation(f64),
    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("configuration is not a vertex of the graph")]
    VertexNotFound,
    #[error("requested {requested} critical seeds but only {available} are available")]
    NotEnoughSeeds { requested: usize, available: usize },
    #[error("critical mask is empty")]
    EmptyMask,
    #[error("no collision-free configuration found in the critical mask after {0} attempts")]
    InfeasibleMask(usize),
    #[error("grid has no positive cells")]
    EmptyGrid,
    #[error("no motion plans: {0}")]
    NoData(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
