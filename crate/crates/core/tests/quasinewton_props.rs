use natr::linalg::dot;
use natr::quasinewton::{HessianApprox, UpdateOutcome};
use proptest::prelude::*;

fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..8).prop_flat_map(|n| (vec_strategy(n), vec_strategy(n)))
}

proptest! {
    #[test]
    fn curvature_safeguard_and_secant((s, y) in pair()) {
        prop_assume!(dot(&s, &s) > 1e-4);
        let mut h = HessianApprox::identity(s.len()).unwrap();
        match h.mbfgs_update(&s, &y, 1.0) {
            UpdateOutcome::Applied { ybar, shift } => {
                let ss = dot(&s, &s);
                prop_assert!(shift >= 1e-6);
                prop_assert!(dot(&ybar, &s) >= 1e-6 * ss * (1.0 - 1e-6));
                prop_assert!(h.secant_residual(&s, &ybar) <= 1e-8);
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
        let b = h.matrix();
        prop_assert!(b == &b.transpose());
    }

    #[test]
    fn positive_curvature_pairs_keep_b_positive_definite(
        steps in prop::collection::vec((vec_strategy(4), 0.5f64..2.0), 1..12)
    ) {
        // y = A s for a fixed SPD A gives well-conditioned secant pairs
        let a = nalgebra::DMatrix::from_row_slice(4, 4, &[
            3.0, 1.0, 0.0, 0.0,
            1.0, 2.0, 0.5, 0.0,
            0.0, 0.5, 1.5, 0.2,
            0.0, 0.0, 0.2, 1.0,
        ]);
        let mut h = HessianApprox::identity(4).unwrap();
        for (s, scale) in steps {
            prop_assume!(dot(&s, &s) > 1e-6);
            let s: Vec<f64> = s.iter().map(|v| v * scale).collect();
            let y = (&a * nalgebra::DVector::from_column_slice(&s)).as_slice().to_vec();
            h.mbfgs_update(&s, &y, 1.0);
            prop_assert!(h.is_positive_definite());
            prop_assert!(h.frobenius_norm() <= h.norm_cap());
        }
    }

    #[test]
    fn tiny_steps_leave_b_untouched(x_norm in 1.0f64..1e6, n in 1usize..6) {
        let mut h = HessianApprox::identity(n).unwrap();
        let s = vec![1e-15 * x_norm / n as f64; n];
        let out = h.mbfgs_update(&s, &vec![1.0; n], x_norm);
        prop_assert_eq!(out, UpdateOutcome::SkippedShortStep);
        prop_assert_eq!(h.matrix(), &nalgebra::DMatrix::identity(n, n));
    }
}

#[test]
fn supplied_bs_matches_internal_product() {
    let mut a = HessianApprox::identity(3).unwrap();
    a.mbfgs_update(&[1.0, 0.5, 0.0], &[2.0, 0.3, 0.1], 1.0);
    let mut b = a.clone();
    let s = [0.2, -0.4, 0.9];
    let y = [0.1, -0.7, 1.3];
    let bs = (a.matrix() * nalgebra::DVector::from_column_slice(&s)).as_slice().to_vec();
    a.mbfgs_update(&s, &y, 1.0);
    b.mbfgs_update_with(&s, &bs, &y, 1.0);
    assert_eq!(a, b);
}
