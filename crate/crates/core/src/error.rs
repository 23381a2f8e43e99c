use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A model was given the wrong number of rates, paths, or compartments.
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    /// Integration produced a non-finite state.
    #[error("integration produced a non-finite state at grid step {step}")]
    IntegrationOverflow { step: usize },

    /// A numeric argument fell outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent configuration (model/data mismatch, bad grid, bad
    /// optimizer coefficients, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A parameter path could not be mapped to or from the flat vector.
    #[error("encoding error: {0}")]
    Encoding(String),

    /// Malformed CSV or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
