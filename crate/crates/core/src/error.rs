use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("color {0} is not in the color set of this action")]
    ColorNotInSet(String),

    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("ambient mismatch: expected {expected} cubes, found {found}")]
    AmbientMismatch { expected: usize, found: usize },

    #[error("cannot compose: left corank {corank} differs from right rank {rank}")]
    RankMismatch { corank: usize, rank: usize },

    #[error("elements belong to different actions")]
    ActionMismatch,

    #[error("element is twisted; the operation needs an untwisted element")]
    TwistedInput,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("resource limit exceeded: {found} vertices (cap {cap})")]
    ResourceLimit { found: usize, cap: usize },

    #[error("inconsistent vertex canonicalization: {0}")]
    Canonicalization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
