use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("modulus {0} exceeds the configured cap {1}")]
    ModulusCap(u64, u64),
    #[error("{0} is not a multiple of {1}")]
    NotMultiple(u64, u64),
    #[error("{a} is not invertible modulo {q}")]
    NotInvertible { a: i64, q: i64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is not in SL(3,Z): det = {0}")]
    NotUnimodular(i128),
    #[error("integer overflow")]
    Overflow,
    #[error("wrong Bruhat cell: expected {expected}, found {found}")]
    WrongCell { expected: String, found: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("inconsistent characters: {0}")]
    Inconsistent(String),
    #[error("evaluation routes disagree: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
