use thiserror::Error;

use crate::action::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("elements belong to different groups: moduli {left:?} vs {right:?}")]
    AmbientMismatch { left: Vec<u32>, right: Vec<u32> },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },

    #[error("enumeration limit exceeded: needs more than {limit} elements")]
    LimitExceeded { limit: usize },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("element {0:?} is not in the subgroup")]
    NotInSubgroup(Vec<u32>),

    #[error("element {0:?} is not a state of the action")]
    NotAState(Vec<u32>),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("action validation failed:\n{0}")]
    ValidationFailed(ValidationReport),

    #[error("rank {rank} exceeds the rank limit {limit}")]
    RankLimit { rank: usize, limit: usize },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error: 2 for resource limits, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LimitExceeded { .. } | Error::RankLimit { .. } => 2,
            _ => 1,
        }
    }
}
