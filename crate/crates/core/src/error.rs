use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is numerically singular (pivot {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("epsilon must be strictly positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("iterate diverged at step {step}")]
    Diverged { step: usize },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
