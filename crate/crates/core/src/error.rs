use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The split between [`Error::Precondition`] and the remaining numerical
/// variants is what the CLI uses to choose between its configuration-error
/// and numerical-error exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite sample value at index {index}")]
    NonFinite { index: usize },

    #[error("bracket expansion exceeded 2^64 scale; input is not normalizable")]
    NotNormalizable,

    #[error("quadrature residual {residual:e} exceeds tolerance {tolerance:e} ({context})")]
    Residual {
        context: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("{points} nodes per axis exceeds the supported cap of {cap}")]
    RuleTooLarge { points: usize, cap: usize },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors caused by invalid caller input rather than by the
    /// numerics.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Precondition(_) | Error::DimensionMismatch { .. } | Error::RuleTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
