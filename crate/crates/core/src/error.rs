use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("division by a value indistinguishable from zero at current precision")]
    DivisionByZero,

    #[error("precision {prec} exceeds the supported window for p = {p} (max {max})")]
    PrecisionTooLarge { p: u32, prec: u32, max: u32 },

    #[error("insufficient precision: need digits up to index {needed}, known up to {known}")]
    InsufficientPrecision { needed: i64, known: i64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies outside the declared domain")]
    DomainEscape,

    #[error("increment t must be nonzero in exact mode")]
    ZeroIncrement,

    #[error("enumeration of {count} cosets exceeds the cap of {cap}")]
    ResourceCap { count: u128, cap: u128 },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("limit did not stabilize: {0}")]
    NonConvergent(String),

    #[error("dense sequence too shallow: need depth {needed} ({count} elements), got {got}")]
    SequenceTooShallow { needed: u32, count: u128, got: usize },

    #[error("sample set is not certified")]
    Uncertified,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
