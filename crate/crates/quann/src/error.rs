use thiserror::Error;

/// Errors produced by state, operator, and dynamics routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operator size {left}x{right} overflows the addressable dimension")]
    SizeOverflow { left: usize, right: usize },

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("state norm² = {norm_sq} deviates from 1 beyond tolerance")]
    NotNormalized { norm_sq: f64 },

    #[error("numerical consistency violated in {context}: residue {residue:e}")]
    Numerical { context: &'static str, residue: f64 },

    #[error("size guard exceeded for {context}: {actual} > {limit}")]
    Guard {
        context: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("trace drift {drift:e} at iteration {step} exceeds the abort threshold")]
    TraceDrift { step: usize, drift: f64 },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
