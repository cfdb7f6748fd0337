use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid irrep {0}")]
    InvalidIrrep(String),
    #[error("generator index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("cutoff exceeded: {0}")]
    CutoffExceeded(String),
    #[error("quadrature exactness {have} below required {need}")]
    InsufficientExactness { have: f64, need: f64 },
    #[error("difference family is not adapted: {0}")]
    NotAdapted(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(String, String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
