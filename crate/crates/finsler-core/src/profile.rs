//! Periodic profiles on the unit circle and the norms they generate.
//!
//! A 1-homogeneous norm on a 2-dimensional tangent plane is stored as the
//! profile f(theta) of its restriction to the unit circle, F(y) = r f(theta)
//! in polar coordinates. Profiles are sampled on a uniform grid and
//! differentiated spectrally, so derivatives are exact for trigonometric
//! polynomials.

use crate::error::{FinslerError, Result};
use std::f64::consts::PI;

/// Compensated (Kahan) summation; keeps the trigonometric projections at the
/// rounding floor even for the high harmonics.
fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Coefficients below this fraction of the largest one are zeroed. The
/// projections of exact trigonometric polynomials then stay exactly sparse,
/// which keeps k^2-amplified rounding noise out of spectral second
/// derivatives.
pub const COEF_TRUNCATION_REL: f64 = 1e-14;

/// A 2*pi-periodic real function sampled on a uniform grid, with spectral
/// (trigonometric series) evaluation and differentiation.
///
/// No sign or convexity constraints are imposed here; candidate solutions of
/// the profile ODE may violate both and are validated separately (see
/// [`TangentNorm2D`]).
#[derive(Debug, Clone)]
pub struct PeriodicProfile {
    samples: Vec<f64>,
    /// a_k of cos(k theta), k = 0..=N/2
    cos_coef: Vec<f64>,
    /// b_k of sin(k theta), k = 0..=N/2 (b_0 = b_{N/2} = 0)
    sin_coef: Vec<f64>,
}

impl PeriodicProfile {
    /// Build from samples f(theta_j), theta_j = 2*pi*j/N. N must be even, >= 4.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n < 4 || n % 2 != 0 {
            return Err(FinslerError::BadResolution(n));
        }
        let half = n / 2;
        let mut cos_coef = vec![0.0; half + 1];
        let mut sin_coef = vec![0.0; half + 1];
        let step = 2.0 * PI / n as f64;
        for k in 0..=half {
            let ck = kahan_sum(
                samples
                    .iter()
                    .enumerate()
                    .map(|(j, &f)| f * (k as f64 * j as f64 * step).cos()),
            );
            let scale = if k == 0 || k == half { 1.0 } else { 2.0 };
            cos_coef[k] = scale * ck / n as f64;
            if k > 0 && k < half {
                let sk = kahan_sum(
                    samples
                        .iter()
                        .enumerate()
                        .map(|(j, &f)| f * (k as f64 * j as f64 * step).sin()),
                );
                sin_coef[k] = 2.0 * sk / n as f64;
            }
        }
        let coef_max = cos_coef
            .iter()
            .chain(sin_coef.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let cutoff = COEF_TRUNCATION_REL * coef_max;
        for v in cos_coef.iter_mut().chain(sin_coef.iter_mut()) {
            if v.abs() < cutoff {
                *v = 0.0;
            }
        }
        Ok(Self {
            samples,
            cos_coef,
            sin_coef,
        })
    }

    /// Sample a closure on the uniform grid.
    pub fn from_fn(resolution: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if resolution < 4 || resolution % 2 != 0 {
            return Err(FinslerError::BadResolution(resolution));
        }
        let samples = (0..resolution)
            .map(|j| f(2.0 * PI * j as f64 / resolution as f64))
            .collect();
        Self::from_samples(samples)
    }

    /// Build directly from trigonometric coefficients (a_k, b_k), k = 0..
    /// Lengths may differ; missing harmonics are zero.
    pub fn from_coefficients(resolution: usize, cos_coef: &[f64], sin_coef: &[f64]) -> Result<Self> {
        if resolution < 4 || resolution % 2 != 0 {
            return Err(FinslerError::BadResolution(resolution));
        }
        if cos_coef.len() > resolution / 2 + 1 || sin_coef.len() > resolution / 2 + 1 {
            return Err(FinslerError::InvalidParameter(format!(
                "harmonic content beyond resolution {resolution}"
            )));
        }
        Self::from_fn(resolution, |t| {
            let c = kahan_sum(
                cos_coef
                    .iter()
                    .enumerate()
                    .map(|(k, &a)| a * (k as f64 * t).cos()),
            );
            let s = kahan_sum(
                sin_coef
                    .iter()
                    .enumerate()
                    .map(|(k, &b)| b * (k as f64 * t).sin()),
            );
            c + s
        })
    }

    pub fn resolution(&self) -> usize {
        self.samples.len()
    }

    /// Grid node theta_j = 2*pi*j/N.
    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.samples.len() as f64
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.samples.len()).map(|j| self.theta(j)).collect()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Trigonometric coefficient pair (a_k, b_k); zero beyond N/2.
    pub fn harmonic(&self, k: usize) -> (f64, f64) {
        if k < self.cos_coef.len() {
            (self.cos_coef[k], self.sin_coef[k])
        } else {
            (0.0, 0.0)
        }
    }

    /// Value of the trigonometric interpolant at an arbitrary angle.
    pub fn value(&self, theta: f64) -> f64 {
        kahan_sum((0..self.cos_coef.len()).map(|k| {
            let kt = k as f64 * theta;
            self.cos_coef[k] * kt.cos() + self.sin_coef[k] * kt.sin()
        }))
    }

    /// First derivative of the interpolant.
    pub fn derivative(&self, theta: f64) -> f64 {
        kahan_sum((0..self.cos_coef.len()).map(|k| {
            let kf = k as f64;
            let kt = kf * theta;
            kf * (self.sin_coef[k] * kt.cos() - self.cos_coef[k] * kt.sin())
        }))
    }

    /// Second derivative of the interpolant.
    pub fn second_derivative(&self, theta: f64) -> f64 {
        kahan_sum((0..self.cos_coef.len()).map(|k| {
            let kf = k as f64;
            let kt = kf * theta;
            -kf * kf * (self.cos_coef[k] * kt.cos() + self.sin_coef[k] * kt.sin())
        }))
    }

    pub fn derivative_samples(&self) -> Vec<f64> {
        (0..self.resolution())
            .map(|j| self.derivative(self.theta(j)))
            .collect()
    }

    pub fn second_derivative_samples(&self) -> Vec<f64> {
        (0..self.resolution())
            .map(|j| self.second_derivative(self.theta(j)))
            .collect()
    }

    /// f''(theta_j) + f(theta_j): the strict-convexity margin of r f(theta).
    pub fn convexity_samples(&self) -> Vec<f64> {
        (0..self.resolution())
            .map(|j| {
                let t = self.theta(j);
                self.second_derivative(t) + self.value(t)
            })
            .collect()
    }

    pub fn min_sample(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn min_convexity(&self) -> f64 {
        self.convexity_samples()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// The profile theta -> f(theta + pi) (a half-period rotation of the grid).
    pub fn shifted_half_period(&self) -> Self {
        let n = self.samples.len();
        let shifted: Vec<f64> = (0..n).map(|j| self.samples[(j + n / 2) % n]).collect();
        Self::from_samples(shifted).expect("shift preserves resolution")
    }

    /// a*f + b*g on a common grid.
    pub fn linear_combination(a: f64, f: &Self, b: f64, g: &Self) -> Result<Self> {
        if f.resolution() != g.resolution() {
            return Err(FinslerError::DimensionMismatch {
                expected: f.resolution(),
                got: g.resolution(),
            });
        }
        let samples = f
            .samples
            .iter()
            .zip(&g.samples)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Self::from_samples(samples)
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self::from_samples(self.samples.iter().map(|&v| a * v).collect())
            .expect("scaling preserves resolution")
    }
}

/// Default number of uniform theta samples for profiles.
pub const DEFAULT_RESOLUTION: usize = 256;

/// A positive, strictly convex profile: the restriction to the unit circle of
/// a Minkowski norm F(y) = r f(theta) on a 2-dimensional tangent plane.
///
/// Construction validates f > 0 and f'' + f > 0 on the whole grid.
#[derive(Debug, Clone)]
pub struct TangentNorm2D {
    profile: PeriodicProfile,
}

impl TangentNorm2D {
    pub fn new(profile: PeriodicProfile) -> Result<Self> {
        let min = profile.min_sample();
        if !(min > 0.0) {
            return Err(FinslerError::NonPositiveProfile { min });
        }
        let min_convex = profile.min_convexity();
        if !(min_convex > 0.0) {
            return Err(FinslerError::NonConvexProfile { min: min_convex });
        }
        Ok(Self { profile })
    }

    pub fn from_fn(resolution: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(PeriodicProfile::from_fn(resolution, f)?)
    }

    /// The round norm f = 1 (Euclidean circle).
    pub fn unit(resolution: usize) -> Result<Self> {
        Self::from_fn(resolution, |_| 1.0)
    }

    /// Profile sqrt(g11 cos^2 + 2 g12 cos sin + g22 sin^2) of the norm of a
    /// symmetric positive definite 2x2 matrix.
    pub fn from_metric(g: &nalgebra::Matrix2<f64>, resolution: usize) -> Result<Self> {
        let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
        if !(g[(0, 0)] > 0.0 && det > 0.0) || (g[(0, 1)] - g[(1, 0)]).abs() > 1e-12 {
            return Err(FinslerError::NotPositiveDefinite);
        }
        let (g11, g12, g22) = (g[(0, 0)], g[(0, 1)], g[(1, 1)]);
        Self::from_fn(resolution, |t| {
            let (c, s) = (t.cos(), t.sin());
            (g11 * c * c + 2.0 * g12 * c * s + g22 * s * s).sqrt()
        })
    }

    pub fn profile(&self) -> &PeriodicProfile {
        &self.profile
    }

    pub fn resolution(&self) -> usize {
        self.profile.resolution()
    }

    /// F(y) = r f(theta). Returns 0 at y = 0 (the continuous extension).
    pub fn norm(&self, y: &[f64]) -> f64 {
        let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
        if r == 0.0 {
            return 0.0;
        }
        r * self.profile.value(y[1].atan2(y[0]))
    }

    /// (f, f', f'') at the polar angle of y.
    pub fn profile_trio(&self, y: &[f64]) -> Result<(f64, f64, f64)> {
        if y[0] == 0.0 && y[1] == 0.0 {
            return Err(FinslerError::ZeroVector);
        }
        let t = y[1].atan2(y[0]);
        Ok((
            self.profile.value(t),
            self.profile.derivative(t),
            self.profile.second_derivative(t),
        ))
    }
}
