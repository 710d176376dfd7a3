//! Fundamental tensors, spray coefficients, the conformal spray shift and the
//! projective-equivalence residual.

use crate::delta::ConnectionDelta;
use crate::diff;
use crate::error::{FinslerError, Result};
use crate::field::MetricField;
use crate::profile::TangentNorm2D;
use nalgebra::{DMatrix, DVector, Matrix2};

/// Scale-free positive-definiteness threshold: min eigenvalue must exceed
/// this fraction of the max eigenvalue.
pub const PD_TOL: f64 = 1e-9;

/// Spray coefficients G^i at one (x, y); 2-homogeneous in y.
#[derive(Debug, Clone, PartialEq)]
pub struct SprayValue {
    pub components: DVector<f64>,
}

impl SprayValue {
    pub fn zeros(dim: usize) -> Self {
        Self {
            components: DVector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

pub fn f_squared<M: MetricField>(field: &M, x: &[f64], y: &[f64]) -> f64 {
    let f = field.eval(x, y);
    f * f
}

fn check_dims<M: MetricField>(field: &M, x: &[f64], y: &[f64]) -> Result<usize> {
    let n = field.dim();
    if x.len() != n {
        return Err(FinslerError::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if y.len() != n {
        return Err(FinslerError::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    if y.iter().all(|&v| v == 0.0) {
        return Err(FinslerError::ZeroVector);
    }
    Ok(n)
}

fn validate_pd(g: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sym = (&g + g.transpose()) * 0.5;
    let eigs = sym.clone().symmetric_eigen().eigenvalues;
    let max_eig = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_eig > PD_TOL * max_eig.abs()) {
        return Err(FinslerError::SingularDirection { min_eig, max_eig });
    }
    Ok(sym)
}

/// Fundamental tensor g_ij(x, y) = (1/2) [F^2]_{y^i y^j}, using the field's
/// closed form when present and central differences otherwise. The result is
/// symmetrized and validated positive definite.
pub fn fundamental_tensor<M: MetricField>(field: &M, x: &[f64], y: &[f64]) -> Result<DMatrix<f64>> {
    check_dims(field, x, y)?;
    match field.closed_fundamental(x, y) {
        Some(g) => validate_pd(g),
        None => fundamental_tensor_fd(field, x, y),
    }
}

/// Finite-difference fundamental tensor; ignores any closed form the field
/// has, so it can serve as an independent cross-check.
pub fn fundamental_tensor_fd<M: MetricField>(
    field: &M,
    x: &[f64],
    y: &[f64],
) -> Result<DMatrix<f64>> {
    let n = check_dims(field, x, y)?;
    let f2 = |yy: &[f64]| {
        let v = field.eval(x, yy);
        v * v
    };
    let h = diff::step_second(field.fd_steps(), y);
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                diff::central2_pure(&f2, y, i, h)
            } else {
                diff::central2_mixed(&f2, y, i, j, h)
            };
            g[(i, j)] = 0.5 * v;
            g[(j, i)] = 0.5 * v;
        }
    }
    validate_pd(g)
}

/// F_{y^i}, closed form or central differences.
pub fn grad_y<M: MetricField>(field: &M, x: &[f64], y: &[f64]) -> Result<DVector<f64>> {
    let n = check_dims(field, x, y)?;
    if let Some(g) = field.closed_grad_y(x, y) {
        return Ok(g);
    }
    let f = |yy: &[f64]| field.eval(x, yy);
    let h = diff::step_first(field.fd_steps(), y);
    Ok(DVector::from_iterator(
        n,
        (0..n).map(|i| diff::central1(&f, y, i, h)),
    ))
}

fn f2_grad_x<M: MetricField>(field: &M, x: &[f64], y: &[f64]) -> DVector<f64> {
    if let Some(g) = field.closed_f2_grad_x(x, y) {
        return g;
    }
    let n = field.dim();
    let f2 = |xx: &[f64]| {
        let v = field.eval(xx, y);
        v * v
    };
    let h = diff::step_first(field.fd_steps(), x);
    DVector::from_iterator(n, (0..n).map(|k| diff::central1(&f2, x, k, h)))
}

fn f2_cross_xy<M: MetricField>(field: &M, x: &[f64], y: &[f64]) -> DMatrix<f64> {
    if let Some(c) = field.closed_f2_cross_xy(x, y) {
        return c;
    }
    let n = field.dim();
    let h = diff::step_second(field.fd_steps(), y).max(diff::step_second(field.fd_steps(), x));
    let mut out = DMatrix::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            // central difference in (x^k, y^l) of F^2
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += h;
            xm[k] -= h;
            let mut yp = y.to_vec();
            let mut ym = y.to_vec();
            yp[l] += h;
            ym[l] -= h;
            let f = |xx: &[f64], yy: &[f64]| {
                let v = field.eval(xx, yy);
                v * v
            };
            out[(k, l)] =
                (f(&xp, &yp) - f(&xp, &ym) - f(&xm, &yp) + f(&xm, &ym)) / (4.0 * h * h);
        }
    }
    out
}

fn spray_from_parts(
    g: &DMatrix<f64>,
    cross: &DMatrix<f64>,
    grad_x: &DVector<f64>,
    y: &[f64],
) -> Result<SprayValue> {
    let n = g.nrows();
    let chol = g.clone().cholesky().ok_or(FinslerError::DegenerateMetric)?;
    // rhs_l = [F^2]_{x^k y^l} y^k - [F^2]_{x^l}
    let mut rhs = DVector::zeros(n);
    for l in 0..n {
        let mut acc = 0.0;
        for k in 0..n {
            acc += cross[(k, l)] * y[k];
        }
        rhs[l] = acc - grad_x[l];
    }
    Ok(SprayValue {
        components: chol.solve(&rhs) * 0.25,
    })
}

/// Spray coefficients G^i = (1/4) g^{il} ([F^2]_{x^k y^l} y^k - [F^2]_{x^l}).
pub fn spray<M: MetricField>(field: &M, x: &[f64], y: &[f64]) -> Result<SprayValue> {
    check_dims(field, x, y)?;
    let g = fundamental_tensor(field, x, y)?;
    let cross = f2_cross_xy(field, x, y);
    let grad_x = f2_grad_x(field, x, y);
    spray_from_parts(&g, &cross, &grad_x, y)
}

/// Spray coefficients computed entirely by central differences of F, ignoring
/// every closed-form block of the field.
pub fn spray_fd<M: MetricField>(field: &M, x: &[f64], y: &[f64]) -> Result<SprayValue> {
    check_dims(field, x, y)?;
    let g = fundamental_tensor_fd(field, x, y)?;
    let n = field.dim();
    let f2 = |xx: &[f64]| {
        let v = field.eval(xx, y);
        v * v
    };
    let h1 = diff::step_first(field.fd_steps(), x);
    let grad_x = DVector::from_iterator(n, (0..n).map(|k| diff::central1(&f2, x, k, h1)));
    let h2 = diff::step_second(field.fd_steps(), y).max(diff::step_second(field.fd_steps(), x));
    let mut cross = DMatrix::zeros(n, n);
    let f = |xx: &[f64], yy: &[f64]| {
        let v = field.eval(xx, yy);
        v * v
    };
    for k in 0..n {
        for l in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += h2;
            xm[k] -= h2;
            let mut yp = y.to_vec();
            let mut ym = y.to_vec();
            yp[l] += h2;
            ym[l] -= h2;
            cross[(k, l)] =
                (f(&xp, &yp) - f(&xp, &ym) - f(&xm, &yp) + f(&xm, &ym)) / (4.0 * h2 * h2);
        }
    }
    spray_from_parts(&g, &cross, &grad_x, y)
}

/// The conformal spray shift: for F~ = e^{sigma(x)} F with d sigma = the given
/// covector at x,
///     G~^i = G^i + sigma_0 y^i - (F^2 / 2) sigma^i,
/// where sigma_0 = sigma_i y^i and sigma^i = g^{il} sigma_l.
pub fn conformal_spray_shift<M: MetricField>(
    spray: &SprayValue,
    field: &M,
    x: &[f64],
    y: &[f64],
    sigma: &[f64],
) -> Result<SprayValue> {
    let n = check_dims(field, x, y)?;
    if sigma.len() != n {
        return Err(FinslerError::DimensionMismatch {
            expected: n,
            got: sigma.len(),
        });
    }
    let g = fundamental_tensor(field, x, y)?;
    let chol = g.cholesky().ok_or(FinslerError::DegenerateMetric)?;
    let sigma_vec = DVector::from_column_slice(sigma);
    let sigma_up = chol.solve(&sigma_vec);
    let sigma_0: f64 = sigma.iter().zip(y).map(|(s, v)| s * v).sum();
    let f2 = f_squared(field, x, y);
    let mut out = spray.components.clone();
    for i in 0..n {
        out[i] += sigma_0 * y[i] - 0.5 * f2 * sigma_up[i];
    }
    Ok(SprayValue { components: out })
}

/// Euclidean norm of the component of (2G^i - Gamma^i_{jk} y^j y^k)
/// orthogonal to y. Zero exactly when the spray and the connection share
/// unparameterized geodesics at this (x, y); the scalar freedom along y is
/// quotiented out by the projection.
pub fn projective_residual(
    spray: &SprayValue,
    connection_quadratic: &DVector<f64>,
    y: &[f64],
) -> Result<f64> {
    let n = spray.dim();
    if connection_quadratic.len() != n || y.len() != n {
        return Err(FinslerError::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let y_norm_sq: f64 = y.iter().map(|v| v * v).sum();
    if y_norm_sq == 0.0 {
        return Err(FinslerError::ZeroVector);
    }
    let mut v = DVector::zeros(n);
    for i in 0..n {
        v[i] = 2.0 * spray.components[i] - connection_quadratic[i];
    }
    let dot: f64 = (0..n).map(|i| v[i] * y[i]).sum();
    let mut resid_sq = 0.0;
    for i in 0..n {
        let r = v[i] - dot * y[i] / y_norm_sq;
        resid_sq += r * r;
    }
    Ok(resid_sq.sqrt())
}

/// Projective residual against a constant difference tensor.
pub fn projective_residual_delta(
    spray: &SprayValue,
    delta: &ConnectionDelta,
    y: &[f64],
) -> Result<f64> {
    projective_residual(spray, &delta.contract_quadratic(y), y)
}

/// Closed-form Hessian of F(y) = r f(theta):
///     Hess F = ((f + f'')/r) [[sin^2, -cos sin], [-cos sin, cos^2]].
pub fn hessian_profile(norm: &TangentNorm2D, y: &[f64]) -> Result<Matrix2<f64>> {
    if y.len() != 2 {
        return Err(FinslerError::DimensionMismatch {
            expected: 2,
            got: y.len(),
        });
    }
    let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
    if r == 0.0 {
        return Err(FinslerError::ZeroVector);
    }
    let (f, _, fpp) = norm.profile_trio(y)?;
    let (c, s) = (y[0] / r, y[1] / r);
    let w = (f + fpp) / r;
    Ok(Matrix2::new(w * s * s, -w * c * s, -w * c * s, w * c * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ConformalField, Minkowski2D, MinkowskiField, OpaqueField, RandersField};
    use crate::profile::TangentNorm2D;
    use std::sync::Arc;

    fn euclid2() -> MinkowskiField {
        MinkowskiField::new(2, Arc::new(|y: &[f64]| (y[0] * y[0] + y[1] * y[1]).sqrt()))
    }

    #[test]
    fn euclidean_fundamental_is_identity() {
        let field = euclid2();
        let g = fundamental_tensor(&field, &[0.0, 0.0], &[0.3, -0.9]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - expected).abs() < 1e-6, "g = {g}");
            }
        }
    }

    #[test]
    fn randers_fundamental_closed_vs_fd() {
        let field = RandersField::new(
            DMatrix::identity(2, 2),
            DVector::from_vec(vec![0.5, 0.0]),
            0.0,
        )
        .unwrap();
        let x = [0.0, 0.0];
        let y = [1.0, 0.0];
        let closed = fundamental_tensor(&field, &x, &y).unwrap();
        let fd = fundamental_tensor_fd(&field, &x, &y).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (closed[(i, j)] - fd[(i, j)]).abs() < 1e-6,
                    "mismatch at ({i},{j}): {} vs {}",
                    closed[(i, j)],
                    fd[(i, j)]
                );
            }
        }
    }

    #[test]
    fn euler_identity_for_profile_norms() {
        let norm = TangentNorm2D::from_fn(256, |t| 1.0 + 0.1 * (2.0 * t).cos()).unwrap();
        let field = Minkowski2D::new(norm);
        let x = [0.0, 0.0];
        for y in [[1.0, 0.0], [0.3, -1.4], [-2.0, 0.7]] {
            let g = fundamental_tensor(&field, &x, &y).unwrap();
            let f2 = f_squared(&field, &x, &y);
            let mut q = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    q += g[(i, j)] * y[i] * y[j];
                }
            }
            assert!((q - f2).abs() < 1e-8 * (1.0 + f2), "q = {q}, F^2 = {f2}");
        }
    }

    #[test]
    fn minkowski_spray_vanishes() {
        let field = euclid2();
        let g = spray(&field, &[0.4, 0.1], &[1.0, 2.0]).unwrap();
        assert!(g.components.norm() < 1e-9);
    }

    #[test]
    fn flat_riemannian_spray_vanishes() {
        let field = RandersField::new(DMatrix::identity(2, 2), DVector::zeros(2), 0.0).unwrap();
        let g = spray(&field, &[0.3, -0.2], &[0.5, 0.5]).unwrap();
        assert!(g.components.norm() < 1e-12);
    }

    #[test]
    fn conformal_riemannian_spray_matches_christoffel() {
        // g = e^{2 x^1} delta at x = 0, y = (0, 1):
        // G^i = (1/2) Gamma^i_{jk} y^j y^k = (1/2)(Gamma^1_22, Gamma^2_22) = (-1/2, 0)
        let field = RandersField::new(DMatrix::identity(2, 2), DVector::zeros(2), 1.0).unwrap();
        let g = spray(&field, &[0.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((g.components[0] + 0.5).abs() < 1e-10, "{}", g.components[0]);
        assert!(g.components[1].abs() < 1e-10);
        // and the FD route agrees
        let gfd = spray_fd(&OpaqueField(field), &[0.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((gfd.components[0] + 0.5).abs() < 1e-6);
        assert!(gfd.components[1].abs() < 1e-6);
    }

    #[test]
    fn spray_is_two_homogeneous() {
        let field = RandersField::new(
            DMatrix::from_row_slice(2, 2, &[1.3, 0.2, 0.2, 0.9]),
            DVector::from_vec(vec![0.2, -0.1]),
            0.7,
        )
        .unwrap();
        let x = [0.3, -0.1];
        let y = [0.8, -0.5];
        let g1 = spray(&field, &x, &y).unwrap();
        for lambda in [0.5_f64, 2.0, 3.0] {
            let ys: Vec<f64> = y.iter().map(|v| lambda * v).collect();
            let g2 = spray(&field, &x, &ys).unwrap();
            let scale = lambda * lambda;
            let err = (&g2.components - scale * &g1.components).norm()
                / (1.0 + scale * g1.components.norm());
            assert!(err < 1e-8, "lambda = {lambda}: err = {err}");
        }
    }

    #[test]
    fn shift_matches_hand_evaluation_on_flat_norm() {
        let field = euclid2();
        let x = [0.0, 0.0];
        let y = [1.0, 0.0];
        let base = spray(&field, &x, &y).unwrap();
        let shifted = conformal_spray_shift(&base, &field, &x, &y, &[1.0, 0.0]).unwrap();
        assert!((shifted.components[0] - 0.5).abs() < 1e-6);
        assert!(shifted.components[1].abs() < 1e-6);
    }

    #[test]
    fn shift_by_sigma_then_minus_sigma_is_identity() {
        let field = RandersField::new(
            DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 1.0]),
            DVector::from_vec(vec![0.1, 0.2]),
            0.0,
        )
        .unwrap();
        let x = [0.2, 0.4];
        let y = [1.0, -0.3];
        let g = spray(&field, &x, &y).unwrap();
        let fwd = conformal_spray_shift(&g, &field, &x, &y, &[0.7, -0.4]).unwrap();
        let back = conformal_spray_shift(&fwd, &field, &x, &y, &[-0.7, 0.4]).unwrap();
        assert!((&back.components - &g.components).norm() < 1e-12);
    }

    #[test]
    fn shift_reproduces_fd_spray_of_conformal_field() {
        let field = RandersField::new(
            DMatrix::identity(2, 2),
            DVector::from_vec(vec![0.4, 0.1]),
            0.0,
        )
        .unwrap();
        let sigma = [1.0, 0.0];
        let conformal = OpaqueField(
            ConformalField::new(field.clone(), DVector::from_column_slice(&sigma)).unwrap(),
        );
        let x = [0.3, -0.5];
        let y = [0.9, 0.4];
        let base = spray(&field, &x, &y).unwrap();
        let shifted = conformal_spray_shift(&base, &field, &x, &y, &sigma).unwrap();
        let direct = spray_fd(&conformal, &x, &y).unwrap();
        let err = (&shifted.components - &direct.components).norm()
            / (1.0 + shifted.components.norm());
        assert!(err < 1e-6, "err = {err}");
    }

    #[test]
    fn projective_residual_ignores_multiples_of_y() {
        let y = [0.6, -1.1];
        let g = SprayValue {
            components: DVector::from_vec(vec![0.3, 0.8]),
        };
        let mut g_shifted = g.clone();
        g_shifted.components[0] += 2.5 * y[0];
        g_shifted.components[1] += 2.5 * y[1];
        let gamma = DVector::from_vec(vec![0.1, -0.2]);
        let r1 = projective_residual(&g, &gamma, &y).unwrap();
        let r2 = projective_residual(&g_shifted, &gamma, &y).unwrap();
        assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn closed_oneform_does_not_change_geodesics() {
        // flat Randers with closed beta = 0.5 dx^1 is projectively flat
        let field = RandersField::new(
            DMatrix::identity(2, 2),
            DVector::from_vec(vec![0.5, 0.0]),
            0.0,
        )
        .unwrap();
        let zero_gamma = DVector::zeros(2);
        for (x, y) in [
            ([0.0, 0.0], [1.0, 0.2]),
            ([0.5, -0.3], [-0.4, 1.0]),
            ([-1.0, 2.0], [0.7, 0.7]),
        ] {
            let g = spray(&field, &x, &y).unwrap();
            let r = projective_residual(&g, &zero_gamma, &y).unwrap();
            assert!(r < 1e-8, "residual {r} at {x:?}, {y:?}");
        }
    }

    #[test]
    fn hessian_profile_flat_cases() {
        let norm = TangentNorm2D::unit(64).unwrap();
        let h = hessian_profile(&norm, &[1.0, 0.0]).unwrap();
        assert!((h - Matrix2::new(0.0, 0.0, 0.0, 1.0)).norm() < 1e-12);
        let h = hessian_profile(&norm, &[0.0, 2.0]).unwrap();
        assert!((h - Matrix2::new(0.5, 0.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn hessian_profile_matches_fd_for_metric_norm() {
        let g = Matrix2::new(2.0, -1.0, -1.0, 1.0);
        let norm = TangentNorm2D::from_metric(&g, 256).unwrap();
        let y = [0.8, 0.6];
        let h = hessian_profile(&norm, &y).unwrap();
        // finite-difference Hessian of F(y) = sqrt(y g y)
        let f = |v: &[f64]| {
            (g[(0, 0)] * v[0] * v[0] + 2.0 * g[(0, 1)] * v[0] * v[1] + g[(1, 1)] * v[1] * v[1])
                .sqrt()
        };
        let hh = 2e-4;
        for i in 0..2 {
            for j in 0..2 {
                let fd = if i == j {
                    diff::central2_pure(&f, &y, i, hh)
                } else {
                    diff::central2_mixed(&f, &y, i, j, hh)
                };
                assert!((h[(i, j)] - fd).abs() < 1e-6, "({i},{j}): {} vs {fd}", h[(i, j)]);
            }
        }
    }

    #[test]
    fn hessian_annihilates_y() {
        let norm = TangentNorm2D::from_fn(256, |t| 1.0 + 0.15 * (2.0 * t).cos() + 0.05 * (3.0 * t).sin())
            .unwrap();
        for y in [[1.0, 0.4], [-0.3, 0.9], [2.0, -1.0]] {
            let h = hessian_profile(&norm, &y).unwrap();
            let r0 = h[(0, 0)] * y[0] + h[(0, 1)] * y[1];
            let r1 = h[(1, 0)] * y[0] + h[(1, 1)] * y[1];
            assert!(r0.abs() < 1e-10 && r1.abs() < 1e-10);
        }
    }
}
