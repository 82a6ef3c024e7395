use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no positive value: string has only zeros")]
    NoPositiveValue,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not in range of pairing: {0}")]
    Unpair(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("budget exceeded: {used} queries > {budget}")]
    Budget { used: u64, budget: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
