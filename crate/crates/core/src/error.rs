use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("no candidate at this precision")]
    NoCandidate,
}

pub type Result<T> = std::result::Result<T, Error>;
