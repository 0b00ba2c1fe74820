use thiserror::Error;

/// Errors raised by the operator laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not selfadjoint: {0}")]
    NotSelfadjoint(String),

    #[error("not bounded: {0}")]
    NotBounded(String),

    /// `1 - F*F` is singular, so `F` has no bounded finite-dimensional preimage.
    #[error("defect operator 1 - F*F is not invertible (min eigenvalue {min_eigenvalue:e})")]
    NotInvertibleDefect { min_eigenvalue: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, GapError>;
