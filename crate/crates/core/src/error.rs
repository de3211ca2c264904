use thiserror::Error;

use crate::sft::{Symbol, Word};

/// Everything that can go wrong while building or combining objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix must be square with at least one row")]
    NotSquare,
    #[error("matrix entry ({row}, {col}) is {value}, expected 0 or 1")]
    NotZeroOne { row: usize, col: usize, value: i64 },
    #[error("matrix is reducible: symbol {to} is not reachable from symbol {from}")]
    Reducible { from: Symbol, to: Symbol },
    #[error("matrix is a permutation matrix (every row sum is 1)")]
    Permutation,

    #[error("symbol {0} is out of range")]
    BadSymbol(Symbol),
    #[error("word {0} is not admissible")]
    Inadmissible(Word),
    #[error("periodic part of a point must be nonempty")]
    EmptyCycle,

    #[error("words do not form a complete prefix-free cylinder partition: {0}")]
    NotPartition(String),

    #[error("negative exponent {0} in Birkhoff sum")]
    NegativeExponent(String),

    #[error("table domain is not a cylinder partition: {0}")]
    DomainNotPartition(String),
    #[error("table image is not a cylinder partition: {0}")]
    ImageNotPartition(String),
    #[error("follower rows differ for entry {from} -> {to}")]
    FollowerMismatch { from: Word, to: Word },
    #[error("table word {0} is empty or not admissible")]
    InadmissibleWord(Word),
    #[error("symbols {0} and {1} do not form an admissible pair")]
    InadmissiblePair(Symbol, Symbol),
    #[error("prefix swap needs two different symbols, got {0} twice")]
    EqualSymbols(Symbol),
    #[error("cylinders {0} and {1} cannot be transposed")]
    BadTransposition(Word, Word),

    #[error("block map is not defined on window {0}")]
    MissingWindow(Word),
    #[error("block map output is not admissible: {0}")]
    NotAdmissibleImage(String),
    #[error("block maps are not mutually inverse on window {0}")]
    NotInverse(Word),
    #[error("chain stages do not fit together: {0}")]
    IncompatibleChain(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("search budget exceeded (max level {max_level}, max depth {max_depth})")]
    SearchBudgetExceeded { max_level: usize, max_depth: usize },

    #[error("line {line}: {message} (at `{token}`)")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
