use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("step size {gamma} outside [0, {max}]")]
    InvalidStep { gamma: f64, max: f64 },

    #[error("active set is empty")]
    EmptyActiveSet,

    #[error("index {index} out of range for active set of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("sparsity {k} exceeds dimension {dim}")]
    SparsityTooLarge { k: usize, dim: usize },

    #[error("empty direction")]
    EmptyDirection,

    #[error("objective inconsistent with smoothness model after {doublings} doublings")]
    SmoothnessViolation { doublings: usize },

    #[error("batch size must be at least 1")]
    ZeroBatch,

    #[error("feature count {count} exceeds limit {limit}")]
    TooManyFeatures { count: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
