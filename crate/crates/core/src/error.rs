use thiserror::Error;

/// Errors produced by builders, solvers and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("N = {n} exceeds the {what} cap of {cap} (raise it explicitly if you accept the cost)")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected N = {expected}, got N = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("certified comparison still undecided at {bits} bits of precision")]
    Undecided { bits: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
