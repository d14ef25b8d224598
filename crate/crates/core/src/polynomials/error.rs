use thiserror::Error;

use crate::multiindex::MultiIndexError;
use crate::sequence_spaces::SpaceError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("monomial {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: String,
        expected: u32,
        found: u32,
    },
    #[error("coefficient of {0} is not finite")]
    NonFinite(String),
    #[error("{0} needs a {1} compact set")]
    WrongVariant(&'static str, &'static str),
    #[error("sample cloud is not closed under truncation at length {0}")]
    NotTruncationClosed(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    MultiIndex(#[from] MultiIndexError),
}
