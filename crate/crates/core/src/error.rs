//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the dynamical sampling toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid sampling pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("least-squares state is rank deficient: {deficient} of {dim} columns undetermined")]
    RankDeficient { deficient: usize, dim: usize },

    #[error("sequence of length {got} is too short for degree {degree} (needs at least {needed})")]
    SequenceTooShort {
        degree: usize,
        needed: usize,
        got: usize,
    },

    #[error(
        "no annihilator up to degree {max_degree} met tolerance {tol:e}; \
         best residual {best_residual:e} at degree {best_degree}"
    )]
    NoAnnihilator {
        max_degree: usize,
        tol: f64,
        best_residual: f64,
        best_degree: usize,
    },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("root {root} has imaginary part beyond the real-snap tolerance")]
    ComplexRoot { root: Complex64 },

    #[error("bin {bin}: expected {expected} roots, got {got}")]
    RootCountMismatch {
        bin: usize,
        expected: usize,
        got: usize,
    },

    #[error("configuration is not recoverable: {0}")]
    NotRecoverable(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to input validation).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::NoAnnihilator { .. }
                | Error::DegenerateData(_)
                | Error::ComplexRoot { .. }
                | Error::RootCountMismatch { .. }
                | Error::NotRecoverable(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
