use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("generator s_{0} out of range for rank {1}")]
    InvalidGenerator(usize, usize),
    #[error("word is not reduced")]
    NotReduced,
    #[error("permutation {0} is not cograssmannian")]
    NotCograssmannian(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not in the image: {0}")]
    NotInImage(String),
    #[error("ordering is not neat")]
    NotNeat,
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
