use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("slot index {index} out of range for rank {rank}")]
    SlotOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("permutation of size {perm} applied to a rank-{rank} tensor")]
    PermSize { perm: usize, rank: usize },
    #[error("no derivation image for A-generator `{0}`")]
    MissingDerivation(String),
    #[error("lambda degree {degree} exceeds the cap {cap}")]
    LambdaCap { degree: u32, cap: u32 },
    #[error("weight error: {0}")]
    Weight(String),
    #[error("missing table entry for ({0}, {1})")]
    MissingEntry(String, String),
    #[error("grading violation: {0}")]
    Grading(String),
    #[error("inconsistent structure: {0}")]
    Inconsistent(String),
    #[error("index error: {0}")]
    Index(String),
}

pub type Result<T> = std::result::Result<T, Error>;
