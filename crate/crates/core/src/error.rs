use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix size parameter K must be at least 2, got {0}")]
    InvalidK(i64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("truncation order {order} too small: {reason}")]
    InsufficientOrder { order: usize, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
