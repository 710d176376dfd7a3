//! Core Finsler-geometry primitives: periodic norm profiles on 2D tangent
//! planes, x-dependent metric fields, fundamental tensors, spray
//! coefficients, the conformal spray shift and the projective-equivalence
//! residual.
//!
//! All operations are pure functions of their inputs and safe to evaluate
//! concurrently over grids of (x, y) samples.

pub mod delta;
pub mod diff;
pub mod error;
pub mod field;
pub mod profile;
pub mod spray;

pub use delta::ConnectionDelta;
pub use diff::FdSteps;
pub use error::FinslerError;
pub use field::{
    one_homogeneity_defect, ConformalField, MetricField, Minkowski2D, MinkowskiField, OpaqueField,
    RandersField,
};
pub use profile::{PeriodicProfile, TangentNorm2D, DEFAULT_RESOLUTION};
pub use spray::{
    conformal_spray_shift, f_squared, fundamental_tensor, fundamental_tensor_fd, grad_y,
    hessian_profile, projective_residual, projective_residual_delta, spray, spray_fd, SprayValue,
};
