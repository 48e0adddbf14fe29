use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("unknown basis element {0:?}")]
    UnknownBasis(String),
    #[error("index {index} out of range for a basis of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("inconsistent bracket table: {0}")]
    InconsistentTable(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("order {requested} exceeds available order {available}")]
    OrderTooHigh { requested: usize, available: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
