use crate::rat::Q;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A series has no terms below its precision, so its valuation cannot be
    /// told apart from zero.
    #[error("indeterminate valuation: series vanishes to precision t^{0}")]
    IndeterminateValuation(Q),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("no value assigned to variable {0}")]
    MissingAssignment(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not on {space}: {reason}")]
    NotOnSpace { space: String, reason: String },
    #[error("points belong to different spaces")]
    MixedSpaces,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }

    /// True for errors caused by running out of working precision.
    pub fn is_precision_exhaustion(&self) -> bool {
        matches!(self, Error::IndeterminateValuation(_))
    }
}
