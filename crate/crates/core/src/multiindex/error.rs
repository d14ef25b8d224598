use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiIndexError {
    #[error("coordinate indices are 1-based, got {0}")]
    InvalidIndex(usize),
    #[error("rank {rank} is out of range for a basis of {size} monomials")]
    RankOutOfRange { rank: u128, size: u128 },
    #[error("multi-index of length {length} exceeds the maximal length {max}")]
    LengthExceeds { length: usize, max: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
}
