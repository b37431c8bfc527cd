use thiserror::Error;

/// Errors produced by field construction, code handling, searches and bounds.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{q} is not a prime power")]
    NotPrimePower { q: u64 },

    #[error("field order {q} is outside the supported range")]
    FieldOrderOutOfRange { q: u64 },

    #[error("element index {index} is not in GF({q})")]
    InvalidElement { index: u64, q: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("enumeration of {count} messages exceeds the guard of {limit}")]
    TooLarge { count: u128, limit: u128 },

    #[error("search space of {count} candidates exceeds the guard of {limit}")]
    SearchSpaceTooLarge { count: u128, limit: u128 },

    #[error("generator has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("multiplicities must be positive (column {column})")]
    InvalidMultiplicity { column: usize },

    #[error("base code is not quasi-minimal")]
    NotQuasiMinimal,

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
