use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function or model.
    #[error("domain error: {0}")]
    Domain(String),

    /// Observations violate a precondition (empty, non-positive, ...).
    #[error("data error: {0}")]
    Data(String),

    /// Data that cannot support an estimate, e.g. zero sample variance.
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// A computation produced a non-finite value or failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A quantity underflowed or overflowed the double range.
    #[error("overflow: {0}")]
    Overflow(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown dataset `{0}` (expected one of ex1, ex2, ex3, ex4)")]
    Lookup(String),

    #[error("dataset `{label}` failed its integrity check: {detail}")]
    Corruption { label: String, detail: String },

    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
