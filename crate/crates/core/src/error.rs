use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid weight function: {0}")]
    InvalidWeight(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("condition {0} is not defined for sequences containing +inf")]
    ExoticCondition(String),
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("index {0} is outside the evaluable range")]
    OutOfRange(String),
    #[error("target is not admissible: {0}")]
    NotAdmissible(String),
    #[error("sampled-only grid is too coarse: {0}")]
    CoarseGrid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
