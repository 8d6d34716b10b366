use std::f64::consts::PI;

use layerpot::geometry::{
    apply_diffeo, directions, make_circle, Curve, Density, Diffeo, Grid, TrigCurve,
};
use layerpot::operators::{assemble, matrix_norm_inf, Kind};
use layerpot::shape::{calderon, pullback, shape_fd_study};
use layerpot::study::decreasing_to_floor;
use layerpot::Error;
use proptest::prelude::*;

fn unit() -> Curve {
    make_circle(1.0, [0.0, 0.0]).unwrap()
}

#[test]
fn identity_pullback_reproduces_assembly() {
    for c in [unit(), Curve::ellipse(2.0, 1.0).unwrap(), Curve::kite()] {
        let g = Grid::new(&c, 48).unwrap();
        for kind in Kind::ALL {
            let p = pullback(kind, &Diffeo::identity(&c), 48).unwrap();
            let diff = (&p.op.matrix - &assemble(kind, &g).matrix).amax();
            assert!(diff <= 1e-14, "{kind}: {diff}");
        }
    }
}

#[test]
fn dilation_by_two() {
    let phi = Diffeo::dilation(&unit(), 2.0);
    let one = Density::new(vec![1.0; 64]);
    let v = pullback(Kind::V, &phi, 64).unwrap().op.apply(&one).unwrap();
    assert!(v
        .values()
        .iter()
        .all(|x| (x + 2.0 * 2f64.ln()).abs() < 1e-13));
    let k = pullback(Kind::K, &phi, 64).unwrap().op.apply(&one).unwrap();
    assert!(k.values().iter().all(|x| (x + 0.5).abs() < 1e-14));
}

#[test]
fn calderon_fixes_interior_cauchy_data() {
    for c in [unit(), Curve::ellipse(2.0, 1.0).unwrap()] {
        let n = 128;
        let g = Grid::new(&c, n).unwrap();
        let cal = calderon(&Diffeo::identity(&c), n).unwrap();
        // u = 1 and u = x₁ are harmonic inside: (u, ∂_ν u) is a fixed point
        let one = Density::constant(&g, 1.0);
        let zero = Density::constant(&g, 0.0);
        let (a, b) = cal.apply(&one, &zero).unwrap();
        for j in 0..n {
            assert!((a.values()[j] - 1.0).abs() < 1e-6 && b.values()[j].abs() < 1e-6);
        }
        let x1 = Density::from_fn(&g, |_, p| p[0]);
        let dn = Density::new(g.normals().iter().map(|v| v[0]).collect());
        let (a, b) = cal.apply(&x1, &dn).unwrap();
        for j in 0..n {
            assert!((a.values()[j] - x1.values()[j]).abs() < 1e-6);
            assert!((b.values()[j] - dn.values()[j]).abs() < 1e-6);
        }
    }
}

#[test]
fn calderon_annihilates_exterior_cauchy_data() {
    // u = x₁/|x|² is harmonic outside a curve around the origin and decays,
    // so its Cauchy data (u, ∂_ν u) lie in the kernel of C
    let c = Curve::ellipse(2.0, 1.0).unwrap();
    let n = 128;
    let g = Grid::new(&c, n).unwrap();
    let cal = calderon(&Diffeo::identity(&c), n).unwrap();
    let u = Density::from_fn(&g, |_, p| p[0] / (p[0] * p[0] + p[1] * p[1]));
    let du = Density::new(
        (0..n)
            .map(|j| {
                let p = g.points()[j];
                let nu = g.normals()[j];
                let r2 = p[0] * p[0] + p[1] * p[1];
                let gx = (p[1] * p[1] - p[0] * p[0]) / (r2 * r2);
                let gy = -2.0 * p[0] * p[1] / (r2 * r2);
                gx * nu[0] + gy * nu[1]
            })
            .collect(),
    );
    let (a, b) = cal.apply(&u, &du).unwrap();
    assert!(
        a.max_abs() < 1e-8 && b.max_abs() < 1e-8,
        "{} {}",
        a.max_abs(),
        b.max_abs()
    );
}

#[test]
fn calderon_residuals_under_refinement() {
    for c in [unit(), Curve::ellipse(2.0, 1.0).unwrap()] {
        let phi = Diffeo::identity(&c);
        let res: Vec<f64> = [64, 128, 256]
            .iter()
            .map(|&n| calderon(&phi, n).unwrap().idempotency_residual())
            .collect();
        let comp: Vec<f64> = [64, 128, 256]
            .iter()
            .map(|&n| calderon(&phi, n).unwrap().complement_residual())
            .collect();
        assert!(res[2] <= 1e-5 && comp[2] <= 1e-5);
        assert!(decreasing_to_floor(&res, 1e-10) && decreasing_to_floor(&comp, 1e-10));
    }
    // a non-convex curve where the residual visibly decreases
    let phi = Diffeo::identity(&Curve::kite());
    let res: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&n| calderon(&phi, n).unwrap().idempotency_residual())
        .collect();
    assert!(res[0] > res[1] && res[1] > res[2], "{res:?}");
}

#[test]
fn zero_direction_gives_zero_differences() {
    let c = unit();
    let rep = shape_fd_study(
        Kind::K,
        &Diffeo::identity(&c),
        &TrigCurve::zero(2),
        &[1e-2, 5e-3],
        32,
    )
    .unwrap();
    assert!(rep.diff_norms.iter().all(|d| *d == 0.0));
    assert_eq!(rep.max_variation, 0.0);
}

#[test]
fn dilation_family_closed_form() {
    // on the circle of radius 1 + t, V[1] = −(1 + t) log(1 + t), whose second
    // derivative at 0 is −1
    let c = unit();
    let phi = Diffeo::identity(&c);
    let h = directions::dilation(&c);
    let one = Density::new(vec![1.0; 32]);
    let value = |t: f64| {
        let v = pullback(Kind::V, &phi.perturbed(t, &h), 32)
            .unwrap()
            .op
            .apply(&one)
            .unwrap();
        v.values()[3]
    };
    for t in [0.1, -0.05, 0.2] {
        assert!((value(t) + (1.0 + t) * (1.0 + t).ln()).abs() < 1e-13);
    }
    let s = 1e-3;
    let second = (value(s) - 2.0 * value(0.0) + value(-s)) / (s * s);
    assert!((second + 1.0).abs() < 1e-5);

    for t in [0.1, -0.05] {
        let k = pullback(Kind::K, &phi.perturbed(t, &h), 32)
            .unwrap()
            .op
            .apply(&one)
            .unwrap();
        assert!(k.values().iter().all(|x| (x + 0.5).abs() < 1e-14));
    }
}

#[test]
fn second_order_differences_on_the_cos2_family() {
    let c = unit();
    let h = directions::radial_cos(&c, 2);
    for kind in [Kind::V, Kind::K] {
        let rep =
            shape_fd_study(kind, &Diffeo::identity(&c), &h, &[1e-2, 5e-3, 2.5e-3], 32).unwrap();
        let s = rep.fd_slope.unwrap();
        assert!((1.8..=2.2).contains(&s), "{kind}: {s}");
    }
}

#[test]
fn invalid_steps_are_dropped() {
    // φ + t·h with h = −p_ref collapses the circle at t = 1
    let c = unit();
    let h = TrigCurve::circle(1.0, [0.0, 0.0]).scaled(-1.0);
    let rep = shape_fd_study(Kind::V, &Diffeo::identity(&c), &h, &[1.0, 1e-2, 5e-3], 16).unwrap();
    assert_eq!(rep.dropped, vec![1.0]);
    assert_eq!(rep.t, vec![1e-2, 5e-3]);
    let err = shape_fd_study(Kind::V, &Diffeo::identity(&c), &h, &[1.0], 16).unwrap_err();
    assert!(matches!(err, Error::InvalidDiffeo(_)));
}

#[test]
fn self_intersecting_image_is_rejected() {
    let c = unit();
    let phi = Diffeo::radial(&c, 1.5, 3);
    assert!(matches!(apply_diffeo(&phi), Err(Error::InvalidDiffeo(_))));
    assert!(pullback(Kind::V, &phi, 32).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dilation_scaling_laws(lam in 0.3f64..4.0, which in 0usize..3) {
        let c = [unit(), Curve::ellipse(2.0, 1.0).unwrap(), Curve::kite()][which].clone();
        let n = 32;
        let base = Grid::new(&c, n).unwrap();
        let phi = Diffeo::dilation(&c, lam);
        let w: Vec<f64> = base.arc_weights();
        // V_λ = λ V − (λ log λ / 2π) 1 wᵀ, K_λ = K, K′_λ = K′, W_λ = W / λ
        let v = assemble(Kind::V, &base).matrix;
        let v_lam = pullback(Kind::V, &phi, n).unwrap().op.matrix;
        let mut expect = &v * lam;
        for i in 0..n {
            for j in 0..n {
                expect[(i, j)] -= lam * lam.ln() / (2.0 * PI) * w[j];
            }
        }
        prop_assert!(matrix_norm_inf(&(v_lam - expect)) < 1e-12);
        for kind in [Kind::K, Kind::Kprime] {
            let a = assemble(kind, &base).matrix;
            let b = pullback(kind, &phi, n).unwrap().op.matrix;
            prop_assert!(matrix_norm_inf(&(a - b)) < 1e-12);
        }
        let a = assemble(Kind::W, &base).matrix / lam;
        let b = pullback(Kind::W, &phi, n).unwrap().op.matrix;
        prop_assert!(matrix_norm_inf(&(&a - b)) < 1e-11 * matrix_norm_inf(&a));
    }
}
