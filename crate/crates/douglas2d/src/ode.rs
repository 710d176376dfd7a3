//! The profile ODE: residuals, the closed-form general solution of admissible
//! quadruples, symmetrization and the H/G diagnostics.

use crate::classify::Classification;
use crate::error::{Douglas2dError, Result};
use crate::quadruple::Quadruple;
use finsler_core::PeriodicProfile;
use std::f64::consts::PI;

/// Residual of (f'' + f) P(theta) - f sin(theta) - f' cos(theta) at every
/// grid node. Linear in f.
pub fn ode_residual(f: &PeriodicProfile, k: &Quadruple) -> Vec<f64> {
    (0..f.resolution())
        .map(|j| {
            let t = f.theta(j);
            let v = f.value(t);
            let d = f.derivative(t);
            let dd = f.second_derivative(t);
            (dd + v) * k.p(t) - v * t.sin() - d * t.cos()
        })
        .collect()
}

pub fn max_abs_residual(f: &PeriodicProfile, k: &Quadruple) -> f64 {
    ode_residual(f, k)
        .into_iter()
        .fold(0.0_f64, |m, r| m.max(r.abs()))
}

/// A solution candidate of the profile ODE together with its verification
/// data. Positivity and convexity are recorded, never assumed.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub profile: PeriodicProfile,
    pub const1: f64,
    pub const2: f64,
    pub max_residual: f64,
    pub min_f: f64,
    pub min_convexity: f64,
}

impl OdeSolution {
    pub fn is_positive_convex(&self) -> bool {
        self.min_f > 0.0 && self.min_convexity > 0.0
    }
}

/// The two-parameter general solution of an admissible quadruple:
///     f(theta) = const1 * sqrt(cos^2 g11 + 2 cos sin g12 + sin^2 g22)
///              + const2 * cos(theta)
/// with g the normalized shape matrix. Requires const1 > 0; convexity of the
/// result is checked numerically on the grid.
pub fn general_solution(
    cls: &Classification,
    const1: f64,
    const2: f64,
    resolution: usize,
) -> Result<OdeSolution> {
    let data = cls.admissible().ok_or(Douglas2dError::NotAdmissible)?;
    if !(const1 > 0.0) {
        return Err(Douglas2dError::InvalidParameter(
            "const1 must be positive".into(),
        ));
    }
    let g = data.gnorm();
    let (g11, g12, g22) = (g[(0, 0)], g[(0, 1)], g[(1, 1)]);
    let profile = PeriodicProfile::from_fn(resolution, |t| {
        let (c, s) = (t.cos(), t.sin());
        let q = g11 * c * c + 2.0 * g12 * c * s + g22 * s * s;
        const1 * q.sqrt() + const2 * t.cos()
    })?;
    let k = crate::classify::metric_to_quadruple(&g)?;
    let max_residual = max_abs_residual(&profile, &k);
    Ok(OdeSolution {
        min_f: profile.min_sample(),
        min_convexity: profile.min_convexity(),
        profile,
        const1,
        const2,
        max_residual,
    })
}

/// f_s(theta) = f(theta) + f(theta + pi): maps solutions to pi-periodic
/// solutions and preserves positivity and convexity.
pub fn symmetrize(f: &PeriodicProfile) -> PeriodicProfile {
    PeriodicProfile::linear_combination(1.0, f, 1.0, &f.shifted_half_period())
        .expect("shift preserves the grid")
}

/// Relative cutoff below which |P| (or |H|) counts as a zero and the point is
/// excluded from the logarithmic-derivative residual.
pub const HG_EXCLUSION_REL: f64 = 1e-3;

/// H, G and the logarithmic-derivative residual on a half-spacing offset grid
/// (the offset keeps the evaluation away from the grid zeros of P and cos).
#[derive(Debug, Clone)]
pub struct HgDiagnostics {
    /// Offset evaluation angles theta_j + pi/N.
    pub thetas: Vec<f64>,
    /// H = f' cos + f sin.
    pub h: Vec<f64>,
    /// G = H/P away from zeros of P, H'/cos as the fallback; NaN where both
    /// denominators vanish.
    pub g: Vec<f64>,
    /// (ln G)' - (cos - P')/P = H'/H - cos/P; None at excluded points.
    pub residual: Vec<Option<f64>>,
    /// Max |residual| over the included points.
    pub max_residual: f64,
    pub excluded_points: usize,
}

pub fn hg_diagnostics(f: &PeriodicProfile, k: &Quadruple) -> HgDiagnostics {
    let n = f.resolution();
    let offset = PI / n as f64;

    // H on the base grid, then its spectral derivative, so H' does not rely
    // on the product-rule identity H' = cos (f + f'').
    let h_base: Vec<f64> = (0..n)
        .map(|j| {
            let t = f.theta(j);
            f.derivative(t) * t.cos() + f.value(t) * t.sin()
        })
        .collect();
    let h_profile = PeriodicProfile::from_samples(h_base).expect("same grid");

    let thetas: Vec<f64> = (0..n).map(|j| f.theta(j) + offset).collect();
    let h: Vec<f64> = thetas.iter().map(|&t| h_profile.value(t)).collect();
    let hp: Vec<f64> = thetas.iter().map(|&t| h_profile.derivative(t)).collect();
    let p: Vec<f64> = thetas.iter().map(|&t| k.p(t)).collect();

    let p_scale = p.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let h_scale = h.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let p_cut = HG_EXCLUSION_REL * (p_scale + f64::MIN_POSITIVE);
    let h_cut = HG_EXCLUSION_REL * (h_scale + f64::MIN_POSITIVE);

    let mut g = Vec::with_capacity(n);
    let mut residual = Vec::with_capacity(n);
    let mut max_residual = 0.0_f64;
    let mut excluded_points = 0;
    for j in 0..n {
        let t = thetas[j];
        let c = t.cos();
        let gj = if p[j].abs() >= p_cut {
            h[j] / p[j]
        } else if c.abs() >= HG_EXCLUSION_REL {
            hp[j] / c
        } else {
            f64::NAN
        };
        g.push(gj);
        if p[j].abs() >= p_cut && h[j].abs() >= h_cut {
            let r = hp[j] / h[j] - c / p[j];
            max_residual = max_residual.max(r.abs());
            residual.push(Some(r));
        } else {
            excluded_points += 1;
            residual.push(None);
        }
    }

    HgDiagnostics {
        thetas,
        h,
        g,
        residual,
        max_residual,
        excluded_points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_quadruple, metric_to_quadruple, DEFAULT_CLASSIFY_TOL};
    use nalgebra::Matrix2;

    #[test]
    fn cosine_is_always_a_solution() {
        let f = PeriodicProfile::from_fn(256, |t| t.cos()).unwrap();
        for k in [
            Quadruple::new(0.0, 1.0, 0.0, 1.0),
            Quadruple::new(2.3, -0.7, 1.1, 0.4),
            Quadruple::new(-5.0, 0.0, 3.0, -2.0),
        ] {
            assert!(max_abs_residual(&f, &k) < 1e-12);
        }
    }

    #[test]
    fn constant_profile_solves_unit_metric_ode() {
        let f = PeriodicProfile::from_fn(256, |_| 1.0).unwrap();
        let k = Quadruple::new(0.0, 1.0, 0.0, 1.0);
        assert!(max_abs_residual(&f, &k) < 1e-12);
    }

    #[test]
    fn residual_is_linear_in_the_profile() {
        let k = Quadruple::new(0.4, -1.0, 0.3, 0.9);
        let f1 = PeriodicProfile::from_fn(128, |t| 1.0 + 0.3 * (2.0 * t).cos()).unwrap();
        let f2 = PeriodicProfile::from_fn(128, |t| 0.5 * (3.0 * t).sin() - 0.2 * t.cos()).unwrap();
        let (a, b) = (1.7, -0.6);
        let combo = PeriodicProfile::linear_combination(a, &f1, b, &f2).unwrap();
        let r1 = ode_residual(&f1, &k);
        let r2 = ode_residual(&f2, &k);
        let rc = ode_residual(&combo, &k);
        for j in 0..128 {
            assert!((rc[j] - (a * r1[j] + b * r2[j])).abs() < 1e-12);
        }
    }

    #[test]
    fn general_solution_identity_metric() {
        let k = Quadruple::new(0.0, 1.0, 0.0, 1.0);
        let cls = classify_quadruple(&k, DEFAULT_CLASSIFY_TOL);
        let sol = general_solution(&cls, 1.0, 0.0, 256).unwrap();
        assert!(sol.max_residual < 1e-12);
        assert!((sol.min_f - 1.0).abs() < 1e-12);
        assert!((sol.min_convexity - 1.0).abs() < 1e-12);

        let sol = general_solution(&cls, 1.0, 0.5, 256).unwrap();
        assert!(sol.max_residual < 1e-12);
        assert!(sol.is_positive_convex());
        // f = 1 + 0.5 cos has f'' + f = 1
        assert!((sol.min_convexity - 1.0).abs() < 1e-12);
        assert!((sol.min_f - 0.5).abs() < 1e-12);
    }

    #[test]
    fn general_solution_skewed_metric() {
        let g = Matrix2::new(2.0, -1.0, -1.0, 1.0);
        let k = metric_to_quadruple(&g).unwrap();
        let cls = classify_quadruple(&k, DEFAULT_CLASSIFY_TOL);
        let sol = general_solution(&cls, 1.0, 0.0, 256).unwrap();
        assert!(sol.max_residual < 1e-9, "residual {}", sol.max_residual);
        assert!(sol.is_positive_convex());
    }

    #[test]
    fn general_solution_requires_admissible() {
        let cls = classify_quadruple(&Quadruple::new(0.0, 1.0, 0.0, -1.0), DEFAULT_CLASSIFY_TOL);
        assert!(matches!(
            general_solution(&cls, 1.0, 0.0, 128),
            Err(Douglas2dError::NotAdmissible)
        ));
    }

    #[test]
    fn symmetrization_examples() {
        let cos = PeriodicProfile::from_fn(64, |t| t.cos()).unwrap();
        let s = symmetrize(&cos);
        assert!(s.samples().iter().all(|v| v.abs() < 1e-15));

        let one = PeriodicProfile::from_fn(64, |_| 1.0).unwrap();
        let s = symmetrize(&one);
        assert!(s.samples().iter().all(|v| (v - 2.0).abs() < 1e-15));

        let mixed = PeriodicProfile::from_fn(64, |t| 1.0 + 0.5 * t.cos()).unwrap();
        let s = symmetrize(&mixed);
        assert!(s.samples().iter().all(|v| (v - 2.0).abs() < 1e-14));
    }

    #[test]
    fn symmetrization_is_half_period_periodic_and_preserves_residual() {
        let g = Matrix2::new(1.5, 0.4, 0.4, 1.0);
        let k = metric_to_quadruple(&g).unwrap();
        let cls = classify_quadruple(&k, DEFAULT_CLASSIFY_TOL);
        // include a cosine part so the symmetrization actually cancels something
        let sol = general_solution(&cls, 1.0, 0.3, 256).unwrap();
        let fs = symmetrize(&sol.profile);
        assert!(max_abs_residual(&fs, &k) < 1e-10);
        let n = fs.resolution();
        for j in 0..n {
            let diff = fs.samples()[j] - fs.samples()[(j + n / 2) % n];
            assert!(diff.abs() < 1e-14);
        }
        assert!(fs.min_sample() > 0.0);
        assert!(fs.min_convexity() > 0.0);
    }

    #[test]
    fn hg_unit_case() {
        // f = 1, K = (0,1,0,1): H = sin, P = sin, G = 1, residual = 0
        let f = PeriodicProfile::from_fn(256, |_| 1.0).unwrap();
        let k = Quadruple::new(0.0, 1.0, 0.0, 1.0);
        let d = hg_diagnostics(&f, &k);
        assert!(d.max_residual < 1e-9, "residual {}", d.max_residual);
        for (j, g) in d.g.iter().enumerate() {
            if d.residual[j].is_some() {
                assert!((g - 1.0).abs() < 1e-9);
            }
        }
        // H interpolates sin at the offset grid
        for (t, h) in d.thetas.iter().zip(&d.h) {
            assert!((h - t.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn hg_skewed_metric_positive_g() {
        let g = Matrix2::new(2.0, -1.0, -1.0, 1.0);
        let k = metric_to_quadruple(&g).unwrap();
        let cls = classify_quadruple(&k, DEFAULT_CLASSIFY_TOL);
        let sol = general_solution(&cls, 1.0, 0.0, 256).unwrap();
        let d = hg_diagnostics(&sol.profile, &k);
        assert!(d.max_residual < 1e-6, "residual {}", d.max_residual);
        for (j, gv) in d.g.iter().enumerate() {
            if d.residual[j].is_some() {
                assert!(*gv > 0.0, "G not positive at point {j}: {gv}");
            }
        }
    }

    #[test]
    fn h_prime_product_rule_identity() {
        // (f' cos + f sin)' = cos (f + f'') for arbitrary smooth profiles
        let f = PeriodicProfile::from_fn(
            256,
            |t| 1.0 + 0.4 * (2.0 * t).cos() - 0.2 * (5.0 * t).sin() + 0.1 * t.cos(),
        )
        .unwrap();
        let h_base: Vec<f64> = (0..256)
            .map(|j| {
                let t = f.theta(j);
                f.derivative(t) * t.cos() + f.value(t) * t.sin()
            })
            .collect();
        let h = PeriodicProfile::from_samples(h_base).unwrap();
        for j in 0..256 {
            let t = f.theta(j);
            let lhs = h.derivative(t);
            let rhs = t.cos() * (f.value(t) + f.second_derivative(t));
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
