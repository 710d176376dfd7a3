//! x-dependent Finsler metric fields.
//!
//! A field exposes F(x, y) and, when it has them, closed-form derivative
//! blocks. Everything a consumer needs that a field does not provide in
//! closed form is obtained by central differences (see [`crate::spray`]).

use crate::diff::FdSteps;
use crate::error::{FinslerError, Result};
use crate::profile::TangentNorm2D;
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// An x-dependent Finsler metric: positive, 1-homogeneous and strictly convex
/// in y at every base point in its working region.
pub trait MetricField {
    fn dim(&self) -> usize;

    /// F(x, y).
    fn eval(&self, x: &[f64], y: &[f64]) -> f64;

    /// Closed-form F_{y^i}, if available.
    fn closed_grad_y(&self, _x: &[f64], _y: &[f64]) -> Option<DVector<f64>> {
        None
    }

    /// Closed-form fundamental tensor g_ij = (1/2) [F^2]_{y^i y^j}, if available.
    fn closed_fundamental(&self, _x: &[f64], _y: &[f64]) -> Option<DMatrix<f64>> {
        None
    }

    /// Closed-form [F^2]_{x^l}, if available.
    fn closed_f2_grad_x(&self, _x: &[f64], _y: &[f64]) -> Option<DVector<f64>> {
        None
    }

    /// Closed-form [F^2]_{x^k y^l} (row k, column l), if available.
    fn closed_f2_cross_xy(&self, _x: &[f64], _y: &[f64]) -> Option<DMatrix<f64>> {
        None
    }

    /// Finite-difference step policy for the fallback paths.
    fn fd_steps(&self) -> FdSteps {
        FdSteps::default()
    }
}

impl<M: MetricField + ?Sized> MetricField for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        (**self).eval(x, y)
    }
    fn closed_grad_y(&self, x: &[f64], y: &[f64]) -> Option<DVector<f64>> {
        (**self).closed_grad_y(x, y)
    }
    fn closed_fundamental(&self, x: &[f64], y: &[f64]) -> Option<DMatrix<f64>> {
        (**self).closed_fundamental(x, y)
    }
    fn closed_f2_grad_x(&self, x: &[f64], y: &[f64]) -> Option<DVector<f64>> {
        (**self).closed_f2_grad_x(x, y)
    }
    fn closed_f2_cross_xy(&self, x: &[f64], y: &[f64]) -> Option<DMatrix<f64>> {
        (**self).closed_f2_cross_xy(x, y)
    }
    fn fd_steps(&self) -> FdSteps {
        (**self).fd_steps()
    }
}

impl MetricField for Box<dyn MetricField + Send + Sync> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        (**self).eval(x, y)
    }
    fn closed_grad_y(&self, x: &[f64], y: &[f64]) -> Option<DVector<f64>> {
        (**self).closed_grad_y(x, y)
    }
    fn closed_fundamental(&self, x: &[f64], y: &[f64]) -> Option<DMatrix<f64>> {
        (**self).closed_fundamental(x, y)
    }
    fn closed_f2_grad_x(&self, x: &[f64], y: &[f64]) -> Option<DVector<f64>> {
        (**self).closed_f2_grad_x(x, y)
    }
    fn closed_f2_cross_xy(&self, x: &[f64], y: &[f64]) -> Option<DMatrix<f64>> {
        (**self).closed_f2_cross_xy(x, y)
    }
    fn fd_steps(&self) -> FdSteps {
        (**self).fd_steps()
    }
}

/// A 2D Minkowski (x-independent) field built from a tangent norm profile.
#[derive(Debug, Clone)]
pub struct Minkowski2D {
    norm: TangentNorm2D,
}

impl Minkowski2D {
    pub fn new(norm: TangentNorm2D) -> Self {
        Self { norm }
    }

    pub fn norm(&self) -> &TangentNorm2D {
        &self.norm
    }
}

impl MetricField for Minkowski2D {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, _x: &[f64], y: &[f64]) -> f64 {
        self.norm.norm(y)
    }

    fn closed_grad_y(&self, _x: &[f64], y: &[f64]) -> Option<DVector<f64>> {
        let (f, fp, _) = self.norm.profile_trio(y).ok()?;
        let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
        let (c, s) = (y[0] / r, y[1] / r);
        Some(DVector::from_vec(vec![f * c - fp * s, f * s + fp * c]))
    }

    fn closed_fundamental(&self, x: &[f64], y: &[f64]) -> Option<DMatrix<f64>> {
        let (f, _, fpp) = self.norm.profile_trio(y).ok()?;
        let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
        let (c, s) = (y[0] / r, y[1] / r);
        let grad = self.closed_grad_y(x, y)?;
        // g = F * Hess(F) + grad F (x) grad F, with the profile Hessian formula.
        let w = r * f * (f + fpp) / r; // F * ((f + f'')/r)
        let mut g = DMatrix::zeros(2, 2);
        g[(0, 0)] = w * s * s + grad[0] * grad[0];
        g[(0, 1)] = -w * c * s + grad[0] * grad[1];
        g[(1, 0)] = g[(0, 1)];
        g[(1, 1)] = w * c * c + grad[1] * grad[1];
        Some(g)
    }

    fn closed_f2_grad_x(&self, _x: &[f64], _y: &[f64]) -> Option<DVector<f64>> {
        Some(DVector::zeros(2))
    }

    fn closed_f2_cross_xy(&self, _x: &[f64], _y: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::zeros(2, 2))
    }
}

/// An x-independent field in any dimension given by a norm closure. Only the
/// x-derivative blocks are closed form (they vanish); y-derivatives fall back
/// to finite differences.
#[derive(Clone)]
pub struct MinkowskiField {
    dim: usize,
    norm: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl MinkowskiField {
    pub fn new(dim: usize, norm: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>) -> Self {
        Self { dim, norm }
    }
}

impl MetricField for MinkowskiField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, _x: &[f64], y: &[f64]) -> f64 {
        (self.norm)(y)
    }

    fn closed_f2_grad_x(&self, _x: &[f64], _y: &[f64]) -> Option<DVector<f64>> {
        Some(DVector::zeros(self.dim))
    }

    fn closed_f2_cross_xy(&self, _x: &[f64], _y: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::zeros(self.dim, self.dim))
    }
}

/// Randers field F = e^{rate x^1} (sqrt(g0_ij y^i y^j) + beta0_i y^i).
///
/// rate = 0 gives a constant Randers metric; rate != 0 gives the conformal
/// family whose Riemannian part is e^{2 rate x^1} g0 and whose 1-form part is
/// e^{rate x^1} beta0. All derivative blocks are closed form.
#[derive(Debug, Clone)]
pub struct RandersField {
    g0: DMatrix<f64>,
    beta0: DVector<f64>,
    rate: f64,
}

impl RandersField {
    pub fn new(g0: DMatrix<f64>, beta0: DVector<f64>, rate: f64) -> Result<Self> {
        let n = g0.nrows();
        if g0.ncols() != n || beta0.len() != n {
            return Err(FinslerError::DimensionMismatch {
                expected: n,
                got: beta0.len(),
            });
        }
        let chol = g0
            .clone()
            .cholesky()
            .ok_or(FinslerError::NotPositiveDefinite)?;
        let beta_norm_sq = beta0.dot(&chol.solve(&beta0));
        if beta_norm_sq >= 1.0 {
            return Err(FinslerError::InvalidParameter(format!(
                "|beta|_g = {:.6} >= 1: norm not strictly convex",
                beta_norm_sq.sqrt()
            )));
        }
        Ok(Self { g0, beta0, rate })
    }

    pub fn riemannian(&self) -> &DMatrix<f64> {
        &self.g0
    }

    pub fn oneform(&self) -> &DVector<f64> {
        &self.beta0
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    fn factor(&self, x: &[f64]) -> f64 {
        (self.rate * x[0]).exp()
    }

    /// alpha(y), (g0 y), F0(y) for the x-independent part.
    fn base_parts(&self, y: &[f64]) -> (f64, DVector<f64>, f64) {
        let yv = DVector::from_column_slice(y);
        let gy = &self.g0 * &yv;
        let alpha = yv.dot(&gy).sqrt();
        let f0 = alpha + self.beta0.dot(&yv);
        (alpha, gy, f0)
    }
}

impl MetricField for RandersField {
    fn dim(&self) -> usize {
        self.g0.nrows()
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let (_, _, f0) = self.base_parts(y);
        self.factor(x) * f0
    }

    fn closed_grad_y(&self, x: &[f64], y: &[f64]) -> Option<DVector<f64>> {
        let (alpha, gy, _) = self.base_parts(y);
        if alpha == 0.0 {
            return None;
        }
        Some(self.factor(x) * (gy / alpha + &self.beta0))
    }

    fn closed_fundamental(&self, x: &[f64], y: &[f64]) -> Option<DMatrix<f64>> {
        let (alpha, gy, f0) = self.base_parts(y);
        if alpha == 0.0 {
            return None;
        }
        // g = F F_yy + F_y F_y^T with F_yy = (g0 - a a^T)/alpha, a = g0 y / alpha.
        let a = gy / alpha;
        let grad0 = &a + &self.beta0;
        let hess0 = (&self.g0 - &a * a.transpose()) / alpha;
        let g = f0 * hess0 + &grad0 * grad0.transpose();
        Some(self.factor(x).powi(2) * g)
    }

    fn closed_f2_grad_x(&self, x: &[f64], y: &[f64]) -> Option<DVector<f64>> {
        let (_, _, f0) = self.base_parts(y);
        let mut out = DVector::zeros(self.dim());
        out[0] = 2.0 * self.rate * self.factor(x).powi(2) * f0 * f0;
        Some(out)
    }

    fn closed_f2_cross_xy(&self, x: &[f64], y: &[f64]) -> Option<DMatrix<f64>> {
        let (alpha, gy, f0) = self.base_parts(y);
        if alpha == 0.0 {
            return None;
        }
        let grad0 = gy / alpha + &self.beta0;
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        let row = 2.0 * self.rate * self.factor(x).powi(2) * 2.0 * f0 * grad0;
        for l in 0..self.dim() {
            out[(0, l)] = row[l];
        }
        Some(out)
    }
}

/// e^{sigma . x} F for a constant covector sigma over an inner field.
///
/// Closed-form blocks are produced whenever the inner field provides the
/// pieces they are assembled from; otherwise consumers fall back to finite
/// differences on the composite value.
#[derive(Debug, Clone)]
pub struct ConformalField<M: MetricField> {
    inner: M,
    sigma: DVector<f64>,
}

impl<M: MetricField> ConformalField<M> {
    pub fn new(inner: M, sigma: DVector<f64>) -> Result<Self> {
        if sigma.len() != inner.dim() {
            return Err(FinslerError::DimensionMismatch {
                expected: inner.dim(),
                got: sigma.len(),
            });
        }
        Ok(Self { inner, sigma })
    }

    pub fn sigma(&self) -> &DVector<f64> {
        &self.sigma
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }

    fn factor(&self, x: &[f64]) -> f64 {
        self.sigma
            .iter()
            .zip(x)
            .map(|(s, xi)| s * xi)
            .sum::<f64>()
            .exp()
    }
}

impl<M: MetricField> MetricField for ConformalField<M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.factor(x) * self.inner.eval(x, y)
    }

    fn closed_grad_y(&self, x: &[f64], y: &[f64]) -> Option<DVector<f64>> {
        Some(self.factor(x) * self.inner.closed_grad_y(x, y)?)
    }

    fn closed_fundamental(&self, x: &[f64], y: &[f64]) -> Option<DMatrix<f64>> {
        Some(self.factor(x).powi(2) * self.inner.closed_fundamental(x, y)?)
    }

    fn closed_f2_grad_x(&self, x: &[f64], y: &[f64]) -> Option<DVector<f64>> {
        let inner_grad = self.inner.closed_f2_grad_x(x, y)?;
        let f2 = self.inner.eval(x, y).powi(2);
        let scale = self.factor(x).powi(2);
        Some(scale * (2.0 * f2 * &self.sigma + inner_grad))
    }

    fn closed_f2_cross_xy(&self, x: &[f64], y: &[f64]) -> Option<DMatrix<f64>> {
        let inner_cross = self.inner.closed_f2_cross_xy(x, y)?;
        let grad_y = self.inner.closed_grad_y(x, y)?;
        let f = self.inner.eval(x, y);
        let scale = self.factor(x).powi(2);
        // [F~^2]_{x^k y^l} = e^{2 sigma x} (2 sigma_k [F^2]_{y^l} + [F^2]_{x^k y^l})
        let f2_grad_y = 2.0 * f * grad_y;
        Some(scale * (2.0 * &self.sigma * f2_grad_y.transpose() + inner_cross))
    }

    fn fd_steps(&self) -> FdSteps {
        self.inner.fd_steps()
    }
}

/// Adapter hiding every closed-form block of a field, forcing the pure
/// finite-difference code paths. Used to build independent oracles.
#[derive(Debug, Clone)]
pub struct OpaqueField<M: MetricField>(pub M);

impl<M: MetricField> MetricField for OpaqueField<M> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.0.eval(x, y)
    }

    fn fd_steps(&self) -> FdSteps {
        self.0.fd_steps()
    }
}

/// Relative defect of F(x, lambda y) = lambda F(x, y).
pub fn one_homogeneity_defect<M: MetricField>(
    field: &M,
    x: &[f64],
    y: &[f64],
    lambda: f64,
) -> f64 {
    let f = field.eval(x, y);
    let scaled: Vec<f64> = y.iter().map(|v| lambda * v).collect();
    let fs = field.eval(x, &scaled);
    (fs - lambda * f).abs() / (1.0 + lambda * f.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::TangentNorm2D;

    #[test]
    fn randers_rejects_large_oneform() {
        let g = DMatrix::identity(2, 2);
        let beta = DVector::from_vec(vec![1.5, 0.0]);
        assert!(RandersField::new(g, beta, 0.0).is_err());
    }

    #[test]
    fn randers_value_and_homogeneity() {
        let g = DMatrix::identity(2, 2);
        let beta = DVector::from_vec(vec![0.5, 0.0]);
        let field = RandersField::new(g, beta, 0.0).unwrap();
        let x = [0.0, 0.0];
        assert!((field.eval(&x, &[1.0, 0.0]) - 1.5).abs() < 1e-15);
        assert!((field.eval(&x, &[0.0, 2.0]) - 2.0).abs() < 1e-15);
        for lambda in [0.5, 2.0, 3.0] {
            assert!(one_homogeneity_defect(&field, &x, &[0.3, -0.8], lambda) < 1e-14);
        }
    }

    #[test]
    fn conformal_factor_scales_value() {
        let norm = TangentNorm2D::unit(64).unwrap();
        let field = Minkowski2D::new(norm);
        let conf = ConformalField::new(field, DVector::from_vec(vec![1.0, 0.0])).unwrap();
        let v = conf.eval(&[0.7, -2.0], &[3.0, 4.0]);
        assert!((v - 0.7f64.exp() * 5.0).abs() < 1e-12);
    }

    #[test]
    fn minkowski_x_derivatives_vanish() {
        let norm = TangentNorm2D::unit(64).unwrap();
        let field = Minkowski2D::new(norm);
        let gx = field.closed_f2_grad_x(&[0.2, 0.3], &[1.0, 1.0]).unwrap();
        assert_eq!(gx, DVector::zeros(2));
    }
}
