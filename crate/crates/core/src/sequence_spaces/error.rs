use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("coordinate indices are 1-based, got {0}")]
    InvalidIndex(usize),
    #[error("non-finite value at coordinate {0}")]
    NonFinite(usize),
    #[error("exponent p must be finite and >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("invalid Lorentz weights: {0}")]
    InvalidWeights(String),
    #[error("invalid lambda: {0}")]
    InvalidLambda(String),
    #[error("weight prefix of length {available} does not cover support of size {needed}")]
    InsufficientWeights { needed: usize, available: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("epsilon-net would hold {size} points, above the cap of {cap}")]
    NetTooLarge { size: u128, cap: usize },
}
