use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid block {elements:?} for v={v}, k={k}: {reason}")]
    InvalidBlock {
        elements: Vec<u32>,
        v: u32,
        k: usize,
        reason: &'static str,
    },

    #[error("rank {rank} out of range (there are {total} blocks)")]
    RankOutOfRange { rank: u64, total: u64 },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("invalid labelling: {0}")]
    InvalidLabelling(String),

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("degenerate trade: {0}")]
    Degenerate(String),

    #[error("collection mismatch: {0}")]
    Mismatch(String),

    #[error("not a Steiner triple system: {0}")]
    InvalidTripleSystem(String),

    #[error("search cap exceeded after {iterations} iterations: {detail}")]
    SearchCap { iterations: u64, detail: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("matrix too large: {cols} columns exceeds the dense cap of {cap}")]
    TooLarge { cols: u64, cap: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),
}
