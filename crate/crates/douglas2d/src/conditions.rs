//! The two necessary conditions on a quadruple read off the logarithmic
//! derivative (cos - P')/P:
//!
//! (A) its principal-value integral over a half period vanishes, and
//! (B) it is bounded, which in the tangent chart t = tan(theta) means the
//!     cubic K0 + K1 t + K2 t^2 + K3 t^3 has exactly one real root and that
//!     root also annihilates the quadratic 1 - K1 - 2 K2 t - 3 K3 t^2.

use crate::quadruple::Quadruple;
use nalgebra::DMatrix;

/// Relative threshold deciding that an eigenvalue of the companion matrix is
/// real.
pub const IMAG_ROOT_TOL: f64 = 1e-9;

/// Relative tolerance for the shared-root test on the quadratic.
pub const ROOT_MATCH_TOL: f64 = 1e-8;

/// Relative threshold below which the cubic's leading coefficient counts as
/// degenerate.
pub const DEGENERATE_K3_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum BoundednessReason {
    /// Single real cubic root, shared with the quadratic.
    SharedSingleRoot,
    /// K3 = 0: P vanishes at theta = pi/2 where the chart analysis breaks
    /// down and the logarithmic derivative blows up.
    DegenerateCubic,
    /// The cubic has more than one real root.
    MultipleRealRoots { count: usize },
    /// The single real root does not annihilate the quadratic.
    RootMismatch { quadratic_value: f64 },
}

#[derive(Debug, Clone)]
pub struct RootAnalysis {
    pub bounded: bool,
    pub cubic_real_roots: Vec<f64>,
    /// The shared root when bounded.
    pub shared_root: Option<f64>,
    pub reason: BoundednessReason,
}

/// Real roots (with multiplicity) of the monic depressed-free cubic
/// t^3 + c2 t^2 + c1 t + c0, by the classical closed form. Fallback for
/// companion matrices the QR iteration refuses (defective multiple roots).
fn cubic_roots_analytic(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    let scale = 1.0 + p.abs().max(q.abs());
    let mut roots = if p.abs() <= 1e-14 * scale && q.abs() <= 1e-14 * scale {
        vec![0.0, 0.0, 0.0]
    } else if disc.abs() <= 1e-12 * scale * scale {
        // one double and one single real root
        let double = -3.0 * q / (2.0 * p);
        let single = 3.0 * q / p;
        vec![double, double, single]
    } else if disc > 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    } else {
        let root_term = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let u = (-q / 2.0 + root_term).cbrt();
        let v = (-q / 2.0 - root_term).cbrt();
        vec![u + v]
    };
    for r in &mut roots {
        *r -= shift;
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Real roots of a polynomial with coefficients c[0] + c[1] t + ..., via the
/// eigenvalues of the companion matrix of its monic normalization (bounded
/// QR iterations); degree <= 2 and refused companion matrices use the closed
/// forms instead.
pub fn real_roots(coeffs: &[f64], imag_tol: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|v| *v == 0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    match deg {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = b * b - 4.0 * a * cc;
            if disc < 0.0 {
                return Vec::new();
            }
            let sq = disc.sqrt();
            let q = -0.5 * (b + b.signum() * sq);
            let mut roots = if q == 0.0 {
                vec![0.0, 0.0]
            } else {
                vec![q / a, cc / q]
            };
            roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
            roots
        }
        _ => {
            let lead = c[deg];
            let monic: Vec<f64> = c[..deg].iter().map(|v| v / lead).collect();
            let mut companion = DMatrix::zeros(deg, deg);
            for i in 0..deg {
                companion[(i, deg - 1)] = -monic[i];
            }
            for i in 1..deg {
                companion[(i, i - 1)] = 1.0;
            }
            let schur = nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, 2000);
            match schur {
                Some(s) => {
                    let eigs = s.complex_eigenvalues();
                    let scale = 1.0 + monic.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                    let mut roots: Vec<f64> = eigs
                        .iter()
                        .filter(|z| z.im.abs() <= imag_tol * scale)
                        .map(|z| z.re)
                        .collect();
                    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    roots
                }
                None if deg == 3 => cubic_roots_analytic(monic[0], monic[1], monic[2]),
                None => Vec::new(),
            }
        }
    }
}

/// Condition (B): decide boundedness of (cos - P')/P from the root structure
/// of the chart polynomials.
pub fn condition_b_roots(k: &Quadruple) -> RootAnalysis {
    let scale = k.max_abs();
    if k.k3.abs() <= DEGENERATE_K3_TOL * (1.0 + scale) {
        // Lower-degree chart polynomial: report its roots, but P(pi/2) = K3 = 0
        // makes the logarithmic derivative unbounded at the equator.
        let roots = real_roots(&[k.k0, k.k1, k.k2], IMAG_ROOT_TOL);
        return RootAnalysis {
            bounded: false,
            cubic_real_roots: roots,
            shared_root: None,
            reason: BoundednessReason::DegenerateCubic,
        };
    }
    let roots = real_roots(&[k.k0, k.k1, k.k2, k.k3], IMAG_ROOT_TOL);
    if roots.len() != 1 {
        return RootAnalysis {
            bounded: false,
            cubic_real_roots: roots.clone(),
            shared_root: None,
            reason: BoundednessReason::MultipleRealRoots { count: roots.len() },
        };
    }
    let root = roots[0];
    let q = k.quadratic(root);
    let q_scale = 1.0
        + (1.0 - k.k1).abs()
        + (2.0 * k.k2 * root).abs()
        + (3.0 * k.k3 * root * root).abs();
    if q.abs() <= ROOT_MATCH_TOL * q_scale {
        RootAnalysis {
            bounded: true,
            cubic_real_roots: roots,
            shared_root: Some(root),
            reason: BoundednessReason::SharedSingleRoot,
        }
    } else {
        RootAnalysis {
            bounded: false,
            cubic_real_roots: roots,
            shared_root: None,
            reason: BoundednessReason::RootMismatch { quadratic_value: q },
        }
    }
}

#[derive(Debug, Clone)]
pub enum ConditionA {
    /// Principal value of the half-period integral of (cos - P')/P.
    Value(f64),
    /// Condition (B) fails, so the integral diverges.
    Divergent(BoundednessReason),
}

impl ConditionA {
    pub fn value(&self) -> Option<f64> {
        match self {
            ConditionA::Value(v) => Some(*v),
            ConditionA::Divergent(_) => None,
        }
    }
}

fn composite_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for j in 1..panels {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * j as f64);
    }
    acc * h / 3.0
}

/// Composite Simpson at n and 2n panels with one Richardson extrapolation
/// step. The panel count keeps the symmetric grid off the removable point
/// except through the guarded evaluation.
fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let coarse = composite_simpson(f, a, b, panels);
    let fine = composite_simpson(f, a, b, 2 * panels);
    fine + (fine - coarse) / 15.0
}

/// Condition (A): the principal value of the half-period integral of
/// (cos - P')/P, evaluated in the tangent chart after dropping the odd
/// 3 tan(theta) part (whose symmetric principal value vanishes).
///
/// The chart integrand is the rational function quadratic/cubic; under
/// condition (B) its only real singularity is removable (shared root), and
/// the remaining logarithmic growth at both chart ends cancels in the
/// symmetric pairing q(t) + q(-t). The tail beyond a finite window is mapped
/// to a proper integral by u = 1/t.
pub fn condition_a_integral(k: &Quadruple) -> ConditionA {
    let analysis = condition_b_roots(k);
    if !analysis.bounded {
        return ConditionA::Divergent(analysis.reason);
    }
    let root = analysis.shared_root.expect("bounded implies shared root");

    let guard = 1e-8 * (1.0 + root.abs());
    let limit_at_root = k.quadratic_prime(root) / k.cubic_prime(root);
    let q = move |t: f64| {
        let den = k.cubic(t);
        if (t - root).abs() < guard || den == 0.0 {
            limit_at_root
        } else {
            k.quadratic(t) / den
        }
    };
    let pair = move |t: f64| q(t) + q(-t);

    let window = 8.0 * (1.0 + root.abs());
    let main = integrate(&pair, 0.0, window, 8192);

    // tail: int_window^inf pair(t) dt with u = 1/t; the integrand extends
    // continuously to u = 0, evaluated just inside the endpoint.
    let u_floor = 1e-9 / window;
    let tail_integrand = move |u: f64| {
        let uu = u.max(u_floor);
        pair(1.0 / uu) / (uu * uu)
    };
    let tail = integrate(&tail_integrand, 0.0, 1.0 / window, 2048);

    ConditionA::Value(main + tail)
}
