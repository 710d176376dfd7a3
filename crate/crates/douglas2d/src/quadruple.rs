//! The four coefficients of the periodic profile ODE and their dictionary
//! with 2D connection-difference tensors.

use crate::error::Result;
use finsler_core::{ConnectionDelta, FinslerError};

/// Coefficients (K0, K1, K2, K3) of the cubic angular polynomial
/// P(theta) = K0 cos^3 + K1 cos^2 sin + K2 cos sin^2 + K3 sin^3
/// multiplying f'' + f in the profile ODE
///     (f'' + f) P(theta) = f sin(theta) + f' cos(theta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadruple {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

impl Quadruple {
    pub fn new(k0: f64, k1: f64, k2: f64, k3: f64) -> Self {
        Self { k0, k1, k2, k3 }
    }

    /// Read the coefficients off a 2D difference tensor:
    /// K0 = -T^2_11, K1 = T^1_11 - 2 T^2_12, K2 = 2 T^1_12 - T^2_22, K3 = T^1_22.
    pub fn from_delta(t: &ConnectionDelta) -> Result<Self> {
        if t.dim() != 2 {
            return Err(FinslerError::DimensionMismatch {
                expected: 2,
                got: t.dim(),
            }
            .into());
        }
        Ok(Self {
            k0: -t.get(1, 0, 0),
            k1: t.get(0, 0, 0) - 2.0 * t.get(1, 0, 1),
            k2: 2.0 * t.get(0, 0, 1) - t.get(1, 1, 1),
            k3: t.get(0, 1, 1),
        })
    }

    /// The canonical gauge representative of the 4-to-6 dictionary:
    /// T^2_11 = -K0, T^1_11 = K1, T^1_12 = K2/2, T^1_22 = K3, T^2_12 = T^2_22 = 0.
    /// Round-trips through [`Quadruple::from_delta`] exactly.
    pub fn to_delta(&self) -> ConnectionDelta {
        let mut t = ConnectionDelta::zeros(2);
        t.set(1, 0, 0, -self.k0);
        t.set(0, 0, 0, self.k1);
        t.set(0, 0, 1, self.k2 / 2.0);
        t.set(0, 1, 1, self.k3);
        t
    }

    /// P(theta).
    pub fn p(&self, theta: f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        self.k0 * c * c * c + self.k1 * c * c * s + self.k2 * c * s * s + self.k3 * s * s * s
    }

    /// P'(theta).
    pub fn p_prime(&self, theta: f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        -3.0 * self.k0 * c * c * s
            + self.k1 * (c * c * c - 2.0 * c * s * s)
            + self.k2 * (2.0 * c * c * s - s * s * s)
            + 3.0 * self.k3 * c * s * s
    }

    /// Cubic K0 + K1 t + K2 t^2 + K3 t^3 (P in the tangent chart, up to cos^3).
    pub fn cubic(&self, t: f64) -> f64 {
        self.k0 + t * (self.k1 + t * (self.k2 + t * self.k3))
    }

    pub fn cubic_prime(&self, t: f64) -> f64 {
        self.k1 + t * (2.0 * self.k2 + t * 3.0 * self.k3)
    }

    /// Quadratic 1 - K1 - 2 K2 t - 3 K3 t^2 (the numerator of the boundedness
    /// analysis; equals 1 minus the derivative of the cubic).
    pub fn quadratic(&self, t: f64) -> f64 {
        1.0 - self.k1 - 2.0 * self.k2 * t - 3.0 * self.k3 * t * t
    }

    pub fn quadratic_prime(&self, t: f64) -> f64 {
        -2.0 * self.k2 - 6.0 * self.k3 * t
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.k0, self.k1, self.k2, self.k3]
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}
