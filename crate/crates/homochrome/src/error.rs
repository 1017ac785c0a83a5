use thiserror::Error;

use crate::rational::ParseRationalError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("unsupported shape for this operation: {0}")]
    UnsupportedShape(String),
    #[error("points not in very general position: {0}")]
    Position(String),
    #[error("conditioning failed after {0} halvings")]
    ConditioningFailed(u32),
    #[error("boundaries overlap along a segment")]
    OverlappingBoundaries,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("search budget of {0} steps exhausted")]
    Budget(u64),
    #[error("no good 3-path in a tree-induced range of {size} points")]
    NoGoodPath { size: usize },
    #[error("too many points for this operation: {got} > {limit}")]
    TooLarge { got: usize, limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Number(#[from] ParseRationalError),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidShape(_) => "invalid_shape",
            Error::UnsupportedShape(_) => "unsupported_shape",
            Error::Position(_) => "position",
            Error::ConditioningFailed(_) => "conditioning_failed",
            Error::OverlappingBoundaries => "overlapping_boundaries",
            Error::Precondition(_) => "precondition",
            Error::Invariant(_) => "invariant",
            Error::Budget(_) => "budget_exhausted",
            Error::NoGoodPath { .. } => "no_good_path",
            Error::TooLarge { .. } => "too_large",
            Error::Parse(_) | Error::Number(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
