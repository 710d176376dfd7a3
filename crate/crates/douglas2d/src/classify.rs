//! Admissibility classification of quadruples.
//!
//! A quadruple is admissible exactly when it arises from a symmetric positive
//! definite 2x2 matrix g; in that case the matrix is recovered in the
//! normalized form g = [[C, -A], [-A, 1]] with C - A^2 > 0.

use crate::error::Result;
use crate::quadruple::Quadruple;
use finsler_core::FinslerError;
use nalgebra::Matrix2;

/// Default relative tolerance for the K-consistency tests. Inputs produced by
/// [`metric_to_quadruple`] are exact rational expressions of g, so only
/// rounding noise needs absorbing.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

/// Recovered shape data of an admissible quadruple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleData {
    pub a: f64,
    pub c: f64,
}

impl AdmissibleData {
    /// N = C - A^2 > 0, the determinant of the normalized matrix.
    pub fn n(&self) -> f64 {
        self.c - self.a * self.a
    }

    /// B = A: the shared root of the cubic and the quadratic.
    pub fn b(&self) -> f64 {
        self.a
    }

    /// D = -2A: the linear coefficient of the irreducible quadratic factor.
    pub fn d(&self) -> f64 {
        -2.0 * self.a
    }

    /// E = 1/(A^2 - C) = -1/N.
    pub fn e(&self) -> f64 {
        1.0 / (self.a * self.a - self.c)
    }

    /// The normalized metric [[C, -A], [-A, 1]].
    pub fn gnorm(&self) -> Matrix2<f64> {
        Matrix2::new(self.c, -self.a, -self.a, 1.0)
    }
}

/// Why a quadruple failed classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Inadmissibility {
    /// K3 = 0: the normalized matrix would need g22 = 0.
    ZeroCubicLeadingCoefficient,
    /// N = 1/K3 <= 0: the normalized matrix would be indefinite.
    NonpositiveN { n: f64 },
    /// K0 differs from -K3*A*C beyond tolerance.
    InconsistentK0 { expected: f64, actual: f64 },
    /// K1 differs from 1 + 3*K3*A^2 beyond tolerance.
    InconsistentK1 { expected: f64, actual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Admissible(AdmissibleData),
    Inadmissible(Inadmissibility),
}

impl Classification {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Classification::Admissible(_))
    }

    pub fn admissible(&self) -> Option<&AdmissibleData> {
        match self {
            Classification::Admissible(data) => Some(data),
            Classification::Inadmissible(_) => None,
        }
    }
}

/// The quadruple of a symmetric positive definite 2x2 matrix:
/// K0 = g12 g11 / det, K1 = 1 + 3 g12^2 / det,
/// K2 = 3 g22 g12 / det, K3 = g22^2 / det.
pub fn metric_to_quadruple(g: &Matrix2<f64>) -> Result<Quadruple> {
    let scale = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if (g[(0, 1)] - g[(1, 0)]).abs() > 1e-12 * (1.0 + scale) {
        return Err(FinslerError::NotPositiveDefinite.into());
    }
    let (g11, g12, g22) = (g[(0, 0)], 0.5 * (g[(0, 1)] + g[(1, 0)]), g[(1, 1)]);
    let det = g11 * g22 - g12 * g12;
    if !(g11 > 0.0 && det > 0.0) {
        return Err(FinslerError::NotPositiveDefinite.into());
    }
    Ok(Quadruple {
        k0: g12 * g11 / det,
        k1: 1.0 + 3.0 * g12 * g12 / det,
        k2: 3.0 * g22 * g12 / det,
        k3: g22 * g22 / det,
    })
}

/// The quadruple of the normalized shape matrix [[C, -A], [-A, 1]] in its
/// rational parametrization: K0 = AC/(A^2 - C), K1 = 1 - 3A^2/(A^2 - C),
/// K2 = 3A/(A^2 - C), K3 = -1/(A^2 - C).
pub fn quadruple_from_shape(a: f64, c: f64) -> Quadruple {
    let denom = a * a - c;
    Quadruple {
        k0: a * c / denom,
        k1: 1.0 - 3.0 * a * a / denom,
        k2: 3.0 * a / denom,
        k3: -1.0 / denom,
    }
}

/// Decide admissibility. For K3 > 0 the only candidate shape is
/// A = -K2/(3 K3), C = A^2 + 1/K3; the quadruple is admissible iff K0 and K1
/// agree with that shape to the relative tolerance.
pub fn classify_quadruple(k: &Quadruple, tol: f64) -> Classification {
    if k.k3 == 0.0 {
        return Classification::Inadmissible(Inadmissibility::ZeroCubicLeadingCoefficient);
    }
    let n = 1.0 / k.k3;
    if n <= 0.0 {
        return Classification::Inadmissible(Inadmissibility::NonpositiveN { n });
    }
    let a = -k.k2 / (3.0 * k.k3);
    let c = a * a + n;
    let expected_k0 = -k.k3 * a * c;
    if (k.k0 - expected_k0).abs() > tol * (1.0 + k.k0.abs()) {
        return Classification::Inadmissible(Inadmissibility::InconsistentK0 {
            expected: expected_k0,
            actual: k.k0,
        });
    }
    let expected_k1 = 1.0 + 3.0 * k.k3 * a * a;
    if (k.k1 - expected_k1).abs() > tol * (1.0 + k.k1.abs()) {
        return Classification::Inadmissible(Inadmissibility::InconsistentK1 {
            expected: expected_k1,
            actual: k.k1,
        });
    }
    Classification::Admissible(AdmissibleData { a, c })
}
