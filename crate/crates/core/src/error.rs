use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The evaluation point sits on an atom of the measure.
    #[error("{operation}: singular at {point}")]
    Singularity {
        operation: &'static str,
        point: Complex64,
    },

    #[error("{operation}: numeric domain error: {detail}")]
    NumericDomain {
        operation: &'static str,
        detail: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numerical procedure could not certify its own output.
    #[error("{operation}: {detail}")]
    Diagnostic {
        operation: &'static str,
        detail: String,
    },

    #[error("{operation}: window too small: {detail}")]
    WindowTooSmall {
        operation: &'static str,
        detail: String,
    },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("no reproducing kernel at {point}: evaluation is unbounded")]
    NoKernel { point: Complex64 },

    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
