use kwlab::spectral::{
    exclusion_report, hemisphere_eig0, lambda_one_solutions, radial_admissible, radial_ode_solve, ratio_1d, rayleigh_min,
    wronskian, ExclusionCase, Inequality, Potential, SLProblem,
};
use proptest::prelude::*;

#[test]
fn hemisphere_ground_state() {
    let h = hemisphere_eig0(2000).unwrap();
    assert!((h.eigenvalue - 2.0).abs() < 1e-3);
    assert!(h.distance_to_cos < 1e-2);
}

#[test]
fn zero_potential_exclusion() {
    let r = exclusion_report(ExclusionCase::B3Ct).unwrap();
    assert!((r.mu_min - 2.0).abs() < 5e-3);
    assert!(r.covers_zero_to_three_halves);
}

#[test]
fn case_three_lower_bound() {
    let r = exclusion_report(ExclusionCase::Case3 { m: 1 }).unwrap();
    assert!(r.mu_min >= 6.0 - 5e-3);
    assert!(r.covers_zero_to_three_halves);
}

#[test]
fn unknown_case_is_rejected() {
    assert!(ExclusionCase::parse("case9", 1).is_err());
}

#[test]
fn closed_forms_solve_the_radial_system() {
    for k in [0.5, 1.0, 2.0] {
        let [d, _] = lambda_one_solutions(k, 10.0 / k);
        let st = radial_ode_solve(1.0, k, (10.0 / k, 0.1 / k), d).unwrap();
        assert!(st.max_rel_error(|x| lambda_one_solutions(k, x)[0]) < 1e-8);
    }
}

#[test]
fn closed_form_wronskian_is_two() {
    for x in [0.1, 1.0, 7.0] {
        let [d, g] = lambda_one_solutions(1.3, x);
        assert!((wronskian(x, d, g) - 2.0).abs() < 1e-12);
    }
}

#[test]
fn admissibility_window() {
    assert!(radial_admissible(1.0, 1.0).unwrap().admissible);
    assert!(!radial_admissible(0.0, 1.0).unwrap().admissible);
    assert!(!radial_admissible(2.0, 1.0).unwrap().admissible);
}

#[test]
fn half_line_ratio_of_a_bump() {
    // f = u e^{-u}: ∫f²/u² = 1/2 and ∫f'² = 1/4 exactly.
    let (l, r) = ratio_1d(Inequality::HalfLine, &|u: f64| (u * (-u).exp(), (1.0 - u) * (-u).exp()), 1.0).unwrap();
    assert!((l - 0.5).abs() < 1e-8 && (r - 0.25).abs() < 1e-8);
}

#[test]
fn missing_boundary_zero_is_rejected() {
    assert!(ratio_1d(Inequality::HalfLine, &|u: f64| ((-u).exp(), -(-u).exp()), 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn half_line_ratio_is_dilation_invariant(c in 0.2f64..5.0, p in 1.0f64..3.0) {
        let f = |c: f64| move |u: f64| {
            let v = c * u;
            (v.powf(p) * (-v).exp(), c * (p * v.powf(p - 1.0) - v.powf(p)) * (-v).exp())
        };
        let (l0, r0) = ratio_1d(Inequality::HalfLine, &f(1.0), 1.0).unwrap();
        let (l1, r1) = ratio_1d(Inequality::HalfLine, &f(c), 1.0).unwrap();
        prop_assert!(((l1 / r1) - (l0 / r0)).abs() < 1e-8 * (l0 / r0));
        prop_assert!(l0 <= 4.0 * r0);
    }

    #[test]
    fn wronskian_is_constant_along_solutions(lambda in 0.0f64..2.0, k in 0.3f64..2.0) {
        let a = radial_ode_solve(lambda, k, (1.0, 2.0), (1.0, 0.0)).unwrap();
        let b = radial_ode_solve(lambda, k, (1.0, 2.0), (0.0, 1.0)).unwrap();
        prop_assert_eq!(a.x_grid.len(), b.x_grid.len());
        for i in 0..a.x_grid.len() {
            let w = wronskian(a.x_grid[i], (a.a[i], a.b[i]), (b.a[i], b.b[i]));
            prop_assert!((w - 1.0).abs() < 1e-8, "{}", w);
        }
    }
}

#[test]
fn mu_increases_with_angular_mode() {
    let mut last = f64::NEG_INFINITY;
    for n in 0..4 {
        let mu = rayleigh_min(&SLProblem::new(Potential::Case2 { m: 1 }, n)).unwrap().mu;
        assert!(mu > last);
        last = mu;
    }
}
