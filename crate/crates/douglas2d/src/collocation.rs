//! Fourier-collocation existence search for periodic solutions of the
//! profile ODE, independent of the algebraic classification.
//!
//! The ODE operator L[f] = (f'' + f) P - f sin - f' cos is applied in closed
//! form to a grid-orthonormal trigonometric basis. cos(theta) is in the
//! kernel of L for every quadruple, so its column vanishes identically and is
//! dropped; what remains measures whether a second periodic solution exists.

use crate::classify::{classify_quadruple, Classification, DEFAULT_CLASSIFY_TOL};
use crate::error::{Douglas2dError, Result};
use crate::ode::{general_solution, max_abs_residual, OdeSolution};
use crate::quadruple::Quadruple;
use finsler_core::PeriodicProfile;
use nalgebra::DMatrix;
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy)]
pub struct CollocationSettings {
    /// Highest retained harmonic.
    pub max_harmonic: usize,
    /// Number of collocation points (uniform grid).
    pub grid_size: usize,
    /// Relative singular-value threshold below which a deflated direction
    /// counts as kernel.
    pub kernel_rel_tol: f64,
    /// Resolution of reconstructed candidate profiles.
    pub resolution: usize,
}

impl Default for CollocationSettings {
    fn default() -> Self {
        Self {
            max_harmonic: 64,
            grid_size: 256,
            kernel_rel_tol: 1e-7,
            resolution: 256,
        }
    }
}

/// Outcome of the collocation solve.
#[derive(Debug, Clone)]
pub struct CollocationReport {
    pub max_harmonic: usize,
    pub grid_size: usize,
    pub sigma_max: f64,
    /// Smallest singular value after dropping the cos column.
    pub sigma_min_deflated: f64,
    /// sigma_min_deflated / sigma_max: the achievable relative residual of a
    /// second periodic solution.
    pub relative_sigma_min: f64,
    /// Number of deflated singular values below kernel_rel_tol * sigma_max.
    pub kernel_dimension: usize,
    /// Reconstruction of the smallest singular direction.
    pub candidate: CandidateSolution,
}

impl CollocationReport {
    /// A second periodic solution exists numerically and is a norm profile.
    pub fn found_qualifying_solution(&self) -> bool {
        self.kernel_dimension >= 1 && self.candidate.qualifies
    }
}

#[derive(Debug, Clone)]
pub struct CandidateSolution {
    pub profile: PeriodicProfile,
    pub max_residual: f64,
    pub min_f: f64,
    pub min_convexity: f64,
    /// Positive and strictly convex after the sign choice.
    pub qualifies: bool,
}

/// Basis bookkeeping: the grid-orthonormal functions 1/sqrt(M),
/// sqrt(2/M) cos(k theta), sqrt(2/M) sin(k theta), with cos(theta) omitted.
#[derive(Debug, Clone, Copy)]
enum BasisFn {
    Constant,
    Cos(usize),
    Sin(usize),
}

fn basis_list(max_harmonic: usize) -> Vec<BasisFn> {
    let mut list = vec![BasisFn::Constant];
    for k in 1..=max_harmonic {
        if k != 1 {
            list.push(BasisFn::Cos(k));
        }
        list.push(BasisFn::Sin(k));
    }
    list
}

/// Apply L to a basis function at theta, in closed form.
fn ode_applied(b: BasisFn, k: &Quadruple, theta: f64) -> f64 {
    let p = k.p(theta);
    let (s, c) = theta.sin_cos();
    match b {
        BasisFn::Constant => p - s,
        BasisFn::Cos(m) => {
            let mf = m as f64;
            let (ms, mc) = (mf * theta).sin_cos();
            (1.0 - mf * mf) * mc * p - mc * s + mf * ms * c
        }
        BasisFn::Sin(m) => {
            let mf = m as f64;
            let (ms, mc) = (mf * theta).sin_cos();
            (1.0 - mf * mf) * ms * p - ms * s - mf * mc * c
        }
    }
}

/// Assemble and SVD the deflated collocation operator.
pub fn collocate(k: &Quadruple, settings: &CollocationSettings) -> Result<CollocationReport> {
    if settings.grid_size < 2 * (settings.max_harmonic + 4) {
        return Err(Douglas2dError::InvalidParameter(format!(
            "grid size {} cannot resolve harmonics through {} plus the cubic coupling",
            settings.grid_size, settings.max_harmonic
        )));
    }
    let m = settings.grid_size;
    let basis = basis_list(settings.max_harmonic);
    let cols = basis.len();
    let mut a = DMatrix::zeros(m, cols);
    for (col, &b) in basis.iter().enumerate() {
        let scale = match b {
            BasisFn::Constant => (1.0 / m as f64).sqrt(),
            _ => (2.0 / m as f64).sqrt(),
        };
        for row in 0..m {
            let theta = TAU * row as f64 / m as f64;
            a[(row, col)] = scale * ode_applied(b, k, theta);
        }
    }

    let svd = a.svd(false, true);
    let mut sigmas: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sigmas.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let sigma_max = sigmas[0].max(f64::MIN_POSITIVE);
    let sigma_min_deflated = *sigmas.last().unwrap();
    let kernel_dimension = sigmas
        .iter()
        .filter(|&&s| s < settings.kernel_rel_tol * sigma_max)
        .count();

    // smallest right-singular direction -> candidate profile
    let v_t = svd.v_t.as_ref().expect("requested v_t");
    let min_index = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.partial_cmp(y).unwrap())
        .map(|(i, _)| i)
        .expect("nonempty");
    let mut cos_coef = vec![0.0; settings.max_harmonic + 1];
    let mut sin_coef = vec![0.0; settings.max_harmonic + 1];
    for (col, &b) in basis.iter().enumerate() {
        // grid-RMS-1 normalization of the reconstructed function
        let w = v_t[(min_index, col)];
        match b {
            BasisFn::Constant => cos_coef[0] += w,
            BasisFn::Cos(h) => cos_coef[h] += w * 2.0_f64.sqrt(),
            BasisFn::Sin(h) => sin_coef[h] += w * 2.0_f64.sqrt(),
        }
    }
    let profile = PeriodicProfile::from_coefficients(settings.resolution, &cos_coef, &sin_coef)?;
    // a kernel direction qualifies if either sign of it is a norm profile
    let pos_ok = profile.min_sample() > 0.0 && profile.min_convexity() > 0.0;
    let neg = profile.scaled(-1.0);
    let neg_ok = neg.min_sample() > 0.0 && neg.min_convexity() > 0.0;
    let profile = if !pos_ok && neg_ok { neg } else { profile };
    let max_residual = max_abs_residual(&profile, k);
    let min_f = profile.min_sample();
    let min_convexity = profile.min_convexity();
    let qualifies = kernel_dimension >= 1 && (pos_ok || neg_ok);

    Ok(CollocationReport {
        max_harmonic: settings.max_harmonic,
        grid_size: settings.grid_size,
        sigma_max,
        sigma_min_deflated,
        relative_sigma_min: sigma_min_deflated / sigma_max,
        kernel_dimension,
        candidate: CandidateSolution {
            profile,
            max_residual,
            min_f,
            min_convexity,
            qualifies,
        },
    })
}

/// Combined search: the algebraic classification and the collocation path are
/// both run; they must agree on existence of a positive strictly convex
/// periodic solution, and disagreement is reported as an internal error.
#[derive(Debug, Clone)]
pub struct PeriodicSearch {
    pub classification: Classification,
    pub collocation: CollocationReport,
    /// The closed-form solution (const1 = 1, const2 = 0) when admissible.
    pub solution: Option<OdeSolution>,
}

pub fn periodic_solution_search(k: &Quadruple) -> Result<PeriodicSearch> {
    periodic_solution_search_with(k, &CollocationSettings::default())
}

pub fn periodic_solution_search_with(
    k: &Quadruple,
    settings: &CollocationSettings,
) -> Result<PeriodicSearch> {
    let classification = classify_quadruple(k, DEFAULT_CLASSIFY_TOL);
    let collocation = collocate(k, settings)?;
    let numeric = collocation.found_qualifying_solution();
    if classification.is_admissible() != numeric {
        return Err(Douglas2dError::InternalInconsistency {
            details: format!(
                "classification says admissible={}, collocation says qualifying-solution={} \
                 (relative sigma_min {:.3e}, kernel dim {}, candidate min f {:.3e}, min convexity {:.3e}) \
                 for K = {:?}",
                classification.is_admissible(),
                numeric,
                collocation.relative_sigma_min,
                collocation.kernel_dimension,
                collocation.candidate.min_f,
                collocation.candidate.min_convexity,
                k.as_array()
            ),
        });
    }
    let solution = if classification.is_admissible() {
        let sol = general_solution(&classification, 1.0, 0.0, settings.resolution)?;
        if !sol.is_positive_convex() {
            return Err(Douglas2dError::InternalInconsistency {
                details: format!(
                    "admissible quadruple produced a non-convex closed-form solution: \
                     min f {:.3e}, min convexity {:.3e}",
                    sol.min_f, sol.min_convexity
                ),
            });
        }
        Some(sol)
    } else {
        None
    };
    Ok(PeriodicSearch {
        classification,
        collocation,
        solution,
    })
}
