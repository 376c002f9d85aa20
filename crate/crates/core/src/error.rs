use thiserror::Error;

use crate::lie::LieType;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lowest coefficient {0} is not a unit; inverse would leave the integers")]
    NotAUnit(String),
    #[error("series has no known nonzero terms")]
    EmptySeries,
    #[error("invalid product factor (a={step}, b={offset}, e={exponent}): {reason}")]
    InvalidFactor {
        step: i64,
        offset: i64,
        exponent: i64,
        reason: &'static str,
    },
    #[error("truncation order must be non-negative, got {0}")]
    NegativeOrder(i64),
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("unrecognized Lie type {0:?}")]
    UnknownType(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not simply laced")]
    NotSimplyLaced(LieType),
    #[error("level must be at least 1, got {0}")]
    InvalidLevel(i64),
    #[error("missing seed for residue {0:?}")]
    MissingSeed(Vec<i64>),
    #[error("seed {0:?} lies outside the fundamental box")]
    UnexpectedSeed(Vec<i64>),
    #[error("table order {have} is below the requested order {need}")]
    InsufficientOrder { have: i64, need: i64 },
    #[error("support region too small: no recurrence pair could be tested")]
    InsufficientSupport,
    #[error("lattice point {0:?} lies outside the guaranteed region of the table")]
    OutsideRegion(Vec<i64>),
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("exponent at lattice point {0:?} is not an integer")]
    NonIntegralExponent(Vec<i64>),
    #[error("lowest conformal weight {0} does not give an integral shift")]
    NonIntegralMu(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Errors that mean "outside what this engine computes", as opposed to bad input.
    pub fn is_scope_error(&self) -> bool {
        matches!(
            self,
            Error::NotSimplyLaced(_) | Error::MissingSeed(_) | Error::UnexpectedSeed(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
