//! Property-level invariants of the core operations on randomized inputs.

use finsler_core::{
    conformal_spray_shift, f_squared, fundamental_tensor, hessian_profile,
    one_homogeneity_defect, projective_residual, spray, spray_fd, ConformalField, MetricField,
    Minkowski2D, OpaqueField, RandersField, SprayValue, TangentNorm2D,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn randers_strategy() -> impl Strategy<Value = (RandersField, [f64; 2], [f64; 2])> {
    (
        0.1_f64..2.0,   // g11 scale
        -0.6_f64..0.6,  // off-diagonal factor
        0.1_f64..2.0,   // g22 scale
        -0.5_f64..0.5,  // beta_1
        -0.5_f64..0.5,  // beta_2
        -1.0_f64..1.0,  // rate
        -1.0_f64..1.0,  // x1
        -1.0_f64..1.0,  // x2
        0.2_f64..1.5,   // |y|
        0.0_f64..std::f64::consts::TAU,
    )
        .prop_filter_map("convex Randers data", |(a, c, b, b1, b2, rate, x1, x2, r, t)| {
            let g12 = c * (a * b).sqrt();
            let g = DMatrix::from_row_slice(2, 2, &[a, g12, g12, b]);
            let beta = DVector::from_vec(vec![b1, b2]);
            let field = RandersField::new(g, beta, rate).ok()?;
            Some((field, [x1, x2], [r * t.cos(), r * t.sin()]))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_values_are_one_homogeneous((field, x, y) in randers_strategy()) {
        for lambda in [0.5, 2.0, 3.0] {
            prop_assert!(one_homogeneity_defect(&field, &x, &y, lambda) < 1e-12);
        }
    }

    #[test]
    fn euler_identity_for_fundamental_tensor((field, x, y) in randers_strategy()) {
        let g = fundamental_tensor(&field, &x, &y).unwrap();
        let f2 = f_squared(&field, &x, &y);
        let mut q = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                q += g[(i, j)] * y[i] * y[j];
            }
        }
        prop_assert!((q - f2).abs() < 1e-8 * (1.0 + f2));
    }

    #[test]
    fn spray_two_homogeneity((field, x, y) in randers_strategy()) {
        let g1 = spray(&field, &x, &y).unwrap();
        for lambda in [0.5, 2.0, 3.0] {
            let ys = [lambda * y[0], lambda * y[1]];
            let g2 = spray(&field, &x, &ys).unwrap();
            let scale = lambda * lambda;
            let err = (&g2.components - scale * &g1.components).norm()
                / (1.0 + scale * g1.components.norm());
            prop_assert!(err < 1e-8, "err = {err}");
        }
    }

    #[test]
    fn projective_residual_quotients_span_y((field, x, y) in randers_strategy(), c in -5.0_f64..5.0) {
        let g = spray(&field, &x, &y).unwrap();
        let shifted = SprayValue {
            components: &g.components + c * DVector::from_column_slice(&y),
        };
        let gamma = DVector::from_vec(vec![0.3, -0.4]);
        let r1 = projective_residual(&g, &gamma, &y).unwrap();
        let r2 = projective_residual(&shifted, &gamma, &y).unwrap();
        prop_assert!((r1 - r2).abs() < 1e-10 * (1.0 + r1));
    }
}

/// The shift formula reproduces, to 1e-6, finite-difference sprays of the
/// conformally scaled field across a spread of sample points.
#[test]
fn conformal_shift_matches_fd_sprays_of_scaled_field() {
    let field = RandersField::new(
        DMatrix::from_row_slice(2, 2, &[1.4, 0.3, 0.3, 0.8]),
        DVector::from_vec(vec![0.3, -0.2]),
        0.0,
    )
    .unwrap();
    let sigma = [1.0, 0.0];
    let scaled = OpaqueField(
        ConformalField::new(field.clone(), DVector::from_column_slice(&sigma)).unwrap(),
    );
    let mut worst = 0.0_f64;
    for i in 0..6 {
        for j in 0..6 {
            let x = [-0.5 + 0.2 * i as f64, -0.5 + 0.2 * j as f64];
            let t = 0.37 + 0.91 * (i * 6 + j) as f64;
            let y = [t.cos(), t.sin()];
            let base = spray(&field, &x, &y).unwrap();
            let shifted = conformal_spray_shift(&base, &field, &x, &y, &sigma).unwrap();
            let direct = spray_fd(&scaled, &x, &y).unwrap();
            let err = (&shifted.components - &direct.components).norm()
                / (1.0 + shifted.components.norm());
            worst = worst.max(err);
        }
    }
    assert!(worst < 1e-6, "worst relative error {worst}");
}

/// Closed-form profile Hessians agree with finite differences of r f(theta)
/// and annihilate y, for randomized convex profiles.
#[test]
fn profile_hessians_match_finite_differences() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let a2: f64 = rng.random_range(-0.1..0.1);
        let b3: f64 = rng.random_range(-0.05..0.05);
        let a4: f64 = rng.random_range(-0.03..0.03);
        let norm = TangentNorm2D::from_fn(256, |t| {
            1.0 + a2 * (2.0 * t).cos() + b3 * (3.0 * t).sin() + a4 * (4.0 * t).cos()
        })
        .unwrap();
        let field = Minkowski2D::new(norm.clone());
        let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let r: f64 = rng.random_range(0.5..2.0);
        let y = [r * t.cos(), r * t.sin()];
        let h = hessian_profile(&norm, &y).unwrap();
        let f = |v: &[f64]| field.eval(&[0.0, 0.0], v);
        let step = 2e-4 * (1.0 + r);
        for i in 0..2 {
            for j in 0..2 {
                let fd = if i == j {
                    finsler_core::diff::central2_pure(&f, &y, i, step)
                } else {
                    finsler_core::diff::central2_mixed(&f, &y, i, j, step)
                };
                assert!(
                    (h[(i, j)] - fd).abs() < 1e-6,
                    "entry ({i},{j}): closed {} vs fd {fd}",
                    h[(i, j)]
                );
            }
        }
        let r0 = h[(0, 0)] * y[0] + h[(0, 1)] * y[1];
        let r1 = h[(1, 0)] * y[0] + h[(1, 1)] * y[1];
        assert!(r0.abs() < 1e-9 && r1.abs() < 1e-9);
    }
}
