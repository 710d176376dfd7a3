//! Complete theory of the periodic profile ODE on 2D tangent planes: the
//! quadruple dictionary with connection-difference tensors, the admissibility
//! classification in both directions, the closed-form general solution,
//! symmetrization, the boundedness and integral conditions, and an
//! independent Fourier-collocation existence search.

pub mod classify;
pub mod collocation;
pub mod conditions;
pub mod error;
pub mod ode;
pub mod quadruple;

pub use classify::{
    classify_quadruple, metric_to_quadruple, quadruple_from_shape, AdmissibleData,
    Classification, Inadmissibility, DEFAULT_CLASSIFY_TOL,
};
pub use collocation::{
    collocate, periodic_solution_search, periodic_solution_search_with, CandidateSolution,
    CollocationReport, CollocationSettings, PeriodicSearch,
};
pub use conditions::{
    condition_a_integral, condition_b_roots, real_roots, BoundednessReason, ConditionA,
    RootAnalysis,
};
pub use error::Douglas2dError;
pub use ode::{
    general_solution, hg_diagnostics, max_abs_residual, ode_residual, symmetrize, HgDiagnostics,
    OdeSolution,
};
pub use quadruple::Quadruple;
