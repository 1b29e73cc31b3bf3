use thiserror::Error;

/// Errors raised at operation boundaries across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {k} outside supported range {min}..={max}")]
    DimensionOutOfRange { k: usize, min: usize, max: usize },

    #[error("invalid pattern text {0:?}")]
    InvalidPattern(String),

    #[error("coordinate {coord} is '*' and cannot be flipped")]
    FlipOnStar { coord: usize },

    #[error("coordinate {coord} is out of range for dimension {k}")]
    CoordinateOutOfRange { coord: usize, k: usize },

    #[error("coordinate {coord} is not a '*' coordinate of {pattern}")]
    NotStarCoordinate { coord: usize, pattern: String },

    #[error("not a perfect matching: {0}")]
    NotPerfectMatching(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("colour {colour} not allowed between classes {left} and {right}")]
    ColourOutsideDelta {
        colour: usize,
        left: String,
        right: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("search budget of {budget} expansions exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("internal consistency failure: {0}")]
    Critical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
