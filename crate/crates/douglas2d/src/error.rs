use finsler_core::FinslerError;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Douglas2dError {
    #[error(transparent)]
    Finsler(#[from] FinslerError),

    #[error("operation requires an admissible quadruple")]
    NotAdmissible,

    #[error("algebraic and numerical verdicts disagree: {details}")]
    InternalInconsistency { details: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Douglas2dError>;
