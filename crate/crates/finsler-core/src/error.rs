use thiserror::Error;

/// Errors shared by the norm, field and spray operations.
#[derive(Debug, Clone, Error)]
pub enum FinslerError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("tangent vector must be nonzero")]
    ZeroVector,

    #[error("profile resolution must be an even integer >= 4, got {0}")]
    BadResolution(usize),

    #[error("profile is not positive everywhere: min f = {min:.6e}")]
    NonPositiveProfile { min: f64 },

    #[error("profile is not strictly convex: min (f'' + f) = {min:.6e}")]
    NonConvexProfile { min: f64 },

    #[error(
        "fundamental tensor fails positive definiteness: min eigenvalue {min_eig:.6e}, max {max_eig:.6e}"
    )]
    SingularDirection { min_eig: f64, max_eig: f64 },

    #[error("metric matrix is numerically singular")]
    DegenerateMetric,

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("tensor is not symmetric in its lower index pair")]
    AsymmetricLowerIndices,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, FinslerError>;
