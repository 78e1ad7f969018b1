use kwlab::model::{richardson_sweep, sample_points, theta, FieldPoint, ModelSolution};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

#[test]
fn theta_closed_values() {
    let (th, x) = theta(C64::new(1.0, 0.0), 1.0).unwrap();
    assert!((th - 1f64.asinh()).abs() < 1e-15);
    assert!((x - 2f64.sqrt()).abs() < 1e-15);
    let (_, x) = theta(C64::new(0.0, 4.0), 3.0).unwrap();
    assert!((x - 5.0).abs() < 1e-15);
    assert!(theta(C64::new(1.0, 0.0), 0.0).is_err());
    assert!(theta(C64::new(0.0, 0.0), 1.0).is_err());
}

#[test]
fn nahm_member_is_the_pole() {
    let ms = ModelSolution::nahm();
    for p in sample_points(50, 3) {
        assert!((ms.alpha(&p).unwrap() + 0.5 / p.t).abs() < 1e-15);
        let phi = ms.phi(&p).unwrap();
        assert!((phi.norm() - 1.0 / (2f64.sqrt() * p.t)).abs() < 1e-14);
        assert!(ms.evaluate(&p).unwrap().curvature_norm() < 1e-14);
    }
}

#[test]
fn first_member_at_unit_point() {
    // With t = |z| = 1, tanh Θ = 1/√2 and cosh Θ = √2.
    let ms = ModelSolution::new(1);
    let p = FieldPoint::new(1.0, 1.0, 0.0);
    assert!((ms.alpha(&p).unwrap() + 0.75).abs() < 1e-14);
    assert!((ms.phi(&p).unwrap().norm() - 0.5).abs() < 1e-14);
    assert!((ms.aphi(&p).unwrap() - 0.25).abs() < 1e-14);
}

#[test]
fn reduced_equations_converge_at_second_order() {
    let pts = sample_points(40, 11);
    for m in 0..4 {
        let r = richardson_sweep(&ModelSolution::new(m), &pts, 1e-3).unwrap();
        for ratio in r.ratios() {
            assert!((ratio - 4.0).abs() < 0.5, "m={m} ratio {ratio}");
        }
        let fine = richardson_sweep(&ModelSolution::new(m), &pts, 1e-4).unwrap();
        assert!(fine.max_residual < 1e-6, "m={m}");
    }
}

#[test]
fn properties_pass_for_small_members() {
    for m in 0..4 {
        let r = ModelSolution::new(m).verify_properties(100, 5).unwrap();
        assert!(r.all_pass(), "m={m}: {:?}", r.0.iter().filter(|(_, v)| !v.pass).collect::<Vec<_>>());
    }
}

#[test]
fn dropping_the_higgs_square_breaks_b3() {
    let ms = ModelSolution::new(1);
    let p = FieldPoint::new(1.0, 0.7, -0.4);
    assert!(ms.b3_residual_without_phi_sq(&p, 1e-4).unwrap() > 1e-2);
}

#[test]
fn off_axis_required_for_higher_members() {
    assert!(ModelSolution::new(2).evaluate(&FieldPoint::new(1.0, 0.0, 0.0)).is_err());
    assert!(ModelSolution::nahm().evaluate(&FieldPoint::new(1.0, 0.0, 0.0)).is_ok());
}

proptest! {
    #[test]
    fn alpha_scales_inversely(m in 0u32..4, t in 0.2f64..3.0, z1 in 0.1f64..2.0, z2 in -2.0f64..2.0, lam in 0.2f64..5.0) {
        let ms = ModelSolution::new(m);
        let p = FieldPoint::new(t, z1, z2);
        let a = ms.alpha(&p).unwrap();
        let b = ms.alpha(&p.scaled(lam)).unwrap();
        prop_assert!((lam * b - a).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn alpha_bounds(m in 0u32..4, t in 0.2f64..3.0, z1 in 0.1f64..2.0, z2 in -2.0f64..2.0) {
        let p = FieldPoint::new(t, z1, z2);
        let s = 2.0 * t * ModelSolution::new(m).alpha(&p).unwrap();
        prop_assert!(s <= -1.0 + 1e-12 && s >= -(m as f64 + 1.0) - 1e-12);
    }
}
