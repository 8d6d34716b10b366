use std::f64::consts::{E, PI};

use layerpot::kernel::{deriv_g, enumerate_multiindices, eval_g, planar_table, MultiIndex, K_MAX};
use layerpot::Error;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn fundamental_solution_values() {
    assert_eq!(eval_g(2, &[1.0, 0.0]).unwrap(), 0.0);
    assert!(close(
        eval_g(2, &[E, 0.0]).unwrap(),
        -1.0 / (2.0 * PI),
        1e-15
    ));
    let s = 1.0 / 3f64.sqrt();
    assert!(close(
        eval_g(3, &[s, s, s]).unwrap(),
        1.0 / (4.0 * PI),
        1e-15
    ));
    assert!(close(1.0 / (4.0 * PI), 0.079577, 1e-6));
}

#[test]
fn origin_and_bad_dimension_are_rejected() {
    assert!(matches!(eval_g(2, &[0.0, 0.0]), Err(Error::Singular)));
    assert!(matches!(
        eval_g(4, &[1.0, 0.0, 0.0, 0.0]),
        Err(Error::UnsupportedDimension(4))
    ));
    assert!(deriv_g(5, &MultiIndex::zero(5)).is_err());
}

#[test]
fn first_derivatives_by_hand_and_by_differences() {
    let d = deriv_g(2, &MultiIndex::new(vec![1, 0])).unwrap();
    assert!(close(
        d.eval(&[1.0, 0.0]).unwrap(),
        -1.0 / (2.0 * PI),
        1e-15
    ));
    let h = 1e-5;
    let fd =
        (eval_g(2, &[1.0 + h, 0.0]).unwrap() - eval_g(2, &[1.0 - h, 0.0]).unwrap()) / (2.0 * h);
    assert!(close(fd, -1.0 / (2.0 * PI), 1e-9));

    let d = deriv_g(3, &MultiIndex::new(vec![1, 0, 0])).unwrap();
    assert!(close(
        d.eval(&[1.0, 0.0, 0.0]).unwrap(),
        -1.0 / (4.0 * PI),
        1e-15
    ));
    let fd = (eval_g(3, &[1.0 + h, 0.0, 0.0]).unwrap() - eval_g(3, &[1.0 - h, 0.0, 0.0]).unwrap())
        / (2.0 * h);
    assert!(close(fd, -1.0 / (4.0 * PI), 1e-9));
}

#[test]
fn planar_laplacian_vanishes() {
    let xx = deriv_g(2, &MultiIndex::new(vec![2, 0])).unwrap();
    let yy = deriv_g(2, &MultiIndex::new(vec![0, 2])).unwrap();
    for x in [[0.3, -1.2], [2.0, 0.5], [-0.1, 0.05]] {
        let a = xx.eval(&x).unwrap();
        let b = yy.eval(&x).unwrap();
        assert!((a + b).abs() <= 1e-14 * a.abs().max(1.0));
    }
}

#[test]
fn enumeration_examples() {
    assert_eq!(
        enumerate_multiindices(2, 0),
        vec![MultiIndex::new(vec![0, 0])]
    );
    assert_eq!(
        enumerate_multiindices(2, 2),
        vec![
            MultiIndex::new(vec![0, 2]),
            MultiIndex::new(vec![1, 1]),
            MultiIndex::new(vec![2, 0]),
        ]
    );
    assert_eq!(enumerate_multiindices(3, 1).len(), 3);
}

#[test]
fn enumeration_counts_are_binomial() {
    for k in 0..=K_MAX {
        assert_eq!(enumerate_multiindices(2, k).len(), k + 1);
        assert_eq!(enumerate_multiindices(3, k).len(), (k + 1) * (k + 2) / 2);
    }
}

#[test]
fn stored_forms_have_expected_degrees() {
    // D^β G_n = c·P(x)/|x|^q with deg P = q + 2 − n − |β|
    let table = planar_table();
    assert!(table.get(&MultiIndex::zero(2)).unwrap().is_log());
    for k in 1..=K_MAX {
        for d in table.level(k).unwrap() {
            let q = d.denominator_exponent().unwrap() as i64;
            assert!(!d.is_zero());
            for (exps, _) in d.numerator_terms() {
                let deg: i64 = exps.iter().map(|&e| e as i64).sum();
                assert_eq!(deg, q - k as i64, "{}", d.index());
            }
        }
    }
}

#[test]
fn order_beyond_table_is_rejected() {
    let beta = MultiIndex::new(vec![11, 0]);
    assert!(matches!(
        planar_table().get(&beta),
        Err(Error::OrderTooHigh { order: 11, .. })
    ));
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, n).prop_filter("away from origin", |x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        r > 0.2
    })
}

proptest! {
    #[test]
    fn table_matches_direct_construction(x in point(2), k in 0usize..=6, pick in 0usize..7) {
        let betas = enumerate_multiindices(2, k);
        let beta = &betas[pick % betas.len()];
        let direct = deriv_g(2, beta).unwrap().eval(&x).unwrap();
        let stored = planar_table().eval(beta, &x).unwrap();
        prop_assert!((direct - stored).abs() <= 1e-13 * stored.abs().max(1.0));
    }

    #[test]
    fn planar_table_is_harmonic(x in point(2), k in 0usize..=K_MAX, pick in 0usize..9) {
        let betas = enumerate_multiindices(2, k);
        let beta = &betas[pick % betas.len()];
        let t = planar_table();
        let a = t.eval(&beta.raised(0).raised(0), &x).unwrap();
        let b = t.eval(&beta.raised(1).raised(1), &x).unwrap();
        prop_assert!((a + b).abs() <= 1e-12 * a.abs().max(b.abs()));
    }

    #[test]
    fn derivatives_are_homogeneous(x in point(2), lam in 0.2f64..5.0, k in 1usize..=K_MAX, pick in 0usize..9) {
        let betas = enumerate_multiindices(2, k);
        let d = planar_table().get(&betas[pick % betas.len()]).unwrap();
        let y: Vec<f64> = x.iter().map(|v| v * lam).collect();
        let lhs = d.eval(&y).unwrap();
        let rhs = lam.powi(-(k as i32)) * d.eval(&x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * d.magnitude(&y).unwrap());
    }

    #[test]
    fn log_kernel_scaling(x in point(2), eps in 0.01f64..10.0) {
        let lhs = eval_g(2, &[eps * x[0], eps * x[1]]).unwrap();
        let rhs = eval_g(2, &x).unwrap() - eps.ln() / (2.0 * PI);
        prop_assert!((lhs - rhs).abs() <= 1e-14);
    }

    #[test]
    fn gradient_scaling_in_space(x in point(3), eps in -5.0f64..5.0) {
        prop_assume!(eps.abs() > 0.05);
        let t = layerpot::kernel::KernelTable::new(3, 1).unwrap();
        let zero = MultiIndex::zero(3);
        let y: Vec<f64> = x.iter().map(|v| v * eps).collect();
        let lhs = t.gradient(&zero, &y).unwrap();
        let rhs = t.gradient(&zero, &x).unwrap();
        let f = eps.signum() * eps.abs().powi(-2);
        for j in 0..3 {
            prop_assert!((lhs[j] - f * rhs[j]).abs() <= 1e-13 * lhs.iter().map(|v| v.abs()).sum::<f64>());
        }
    }
}
