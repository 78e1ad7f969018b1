use kwlab::algebra::Su2;
use kwlab::flow::{
    cs_functional, fd4_symbol, gauge_transform, gradient, gradient_check, kuranishi_fixed_point, kuranishi_w,
    linearized_decay, run_flow, FlowConfig, FlowParams, InitKind, ModeVector, TorusField,
};
use kwlab::Error;
use proptest::prelude::*;
use std::f64::consts::TAU;

#[test]
fn zero_field_is_stationary() {
    let f = TorusField::zeros(8, TAU);
    assert_eq!(gradient(&f).max_abs(), 0.0);
    let tr = run_flow(&f, &FlowParams { dt: 0.01, steps: 20 }).unwrap();
    assert!(tr.completed());
    assert!(tr.cs.iter().all(|c| *c == 0.0));
}

#[test]
fn abelian_gradient_is_the_curl() {
    // A = 0, 𝔞 = σ3 sin x1 dx2: the only gradient component is σ3 cos x1 in dx3,
    // up to the difference-stencil symbol.
    let n = 16;
    let f = TorusField::from_fn(n, TAU, |x| ([Su2::ZERO; 3], [Su2::ZERO, Su2([0.0, 0.0, x[0].sin()]), Su2::ZERO]));
    let g = gradient(&f);
    let sym = fd4_symbol(1.0, f.h());
    for p in 0..f.len() {
        let x = f.coords(p);
        let want = Su2([0.0, 0.0, sym * x[0].cos()]);
        assert!((g.conn[p][2] - want).max_abs() < 1e-12);
        assert!(g.conn[p][0].max_abs() < 1e-12 && g.conn[p][1].max_abs() < 1e-12);
        assert!(g.higgs[p].iter().all(|h| h.max_abs() < 1e-12));
    }
}

#[test]
fn gradient_matches_difference_quotients() {
    let f = TorusField::random(8, TAU, 0.5, 2, 3, 9);
    for s in 0..3 {
        let dir = TorusField::random(8, TAU, 1.0, 2, 3, 100 + s);
        let g = gradient_check(&f, &dir, &[1e-3, 5e-4, 2.5e-4]);
        assert!(g.errors.last().unwrap().1 < 1e-6);
        assert!((g.orders[0] - 2.0).abs() < 0.1);
    }
}

#[test]
fn gauge_defect_shrinks_with_resolution() {
    let defect = |n: usize| {
        let f = TorusField::random(n, TAU, 0.3, 1, 2, 4);
        let g = gauge_transform(&f, Su2([1.0, 2.0, 0.5]), &[([1, 0, 1], 0.3, 0.4)], 1.0);
        (cs_functional(&g) - cs_functional(&f)).abs()
    };
    let (a, b) = (defect(16), defect(32));
    assert!(a / b > 8.0, "{a} {b}");
}

#[test]
fn abelian_flow_matches_closed_form() {
    let f = TorusField::abelian(16, TAU, 0.1);
    let tr = run_flow(&f, &FlowParams { dt: 0.02, steps: 100 }).unwrap();
    let rate = 2.0 * fd4_symbol(1.0, f.h());
    let (c0, c1) = (tr.cs[0], *tr.cs.last().unwrap());
    let t = *tr.times.last().unwrap();
    assert!(tr.monotone());
    assert!(((c0 / c1).ln() / t - rate).abs() < 1e-3, "{}", (c0 / c1).ln() / t);
}

#[test]
fn cfl_violation_is_rejected() {
    let f = TorusField::random(16, TAU, 0.01, 1, 1, 1);
    match run_flow(&f, &FlowParams { dt: 1.0, steps: 5 }) {
        Err(Error::Cfl { suggested, .. }) => assert!(suggested > 0.0 && suggested < 1.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn config_errors_name_the_field() {
    let cases = [
        (r#"{"N": 8, "dt": 0.01, "steps": "ten"}"#, "steps"),
        (r#"{"N": 3, "dt": 0.01, "steps": 1}"#, "N"),
        (r#"{"N": 8, "dt": -1, "steps": 1}"#, "dt"),
        (r#"{"N": 8, "dt": 0.01, "steps": 1, "colour": 1}"#, "colour"),
        (r#"{"N": 8, "dt": 0.01, "steps": 1, "init": {"kind": "wavy"}}"#, "init.kind"),
        ("[1, 2]", "<root>"),
    ];
    for (text, name) in cases {
        match FlowConfig::from_json(text) {
            Err(Error::Config { field, .. }) => assert_eq!(field, name, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
    let ok = FlowConfig::from_json(r#"{"N": 8, "dt": 0.01, "steps": 1, "init": {"kind": "abelian", "amplitude": 0.1}}"#).unwrap();
    assert_eq!(ok.init.kind, InitKind::Abelian);
    assert_eq!(ok.l, TAU);
}

#[test]
fn single_mode_decays_exactly() {
    let m = ModeVector::eigen_mode(2, [0, 1, 0], 1.0, 3);
    let d = linearized_decay(2, &m, 3.0, 0.05).unwrap();
    for (t, f) in d.times.iter().zip(&d.f_plus) {
        assert!((f / d.f_plus[0] - (-t).exp()).abs() < 1e-8);
    }
    assert!(d.f_minus.iter().all(|v| *v == 0.0));
}

#[test]
fn mixed_data_decays_at_least_at_unit_rate() {
    let d = linearized_decay(2, &ModeVector::random(2, 8), 5.0, 0.05).unwrap();
    assert!(d.min_plus_rate() >= 1.0);
}

#[test]
fn kuranishi_at_zero_is_zero() {
    let r = kuranishi_fixed_point(&ModeVector::zeros(1), 1e-14).unwrap();
    assert_eq!(r.w_norm, 0.0);
}

#[test]
fn kuranishi_rejects_data_outside_h1() {
    assert!(matches!(kuranishi_w(&ModeVector::random(1, 2), 1e-12), Err(Error::InvalidArgument(_))));
}

#[test]
fn kuranishi_solves_the_projected_equation() {
    let r = kuranishi_fixed_point(&ModeVector::random(1, 5).scaled(0.02), 1e-14).unwrap();
    assert!(r.residual < 1e-10, "{}", r.residual);
    assert!(r.contraction_ratio < 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn cs_is_cubic_in_the_field_scale(seed in 0u64..500, s in 0.1f64..2.0) {
        // cs has a quadratic and a cubic part, so cs(sF) = s²q + s³c.
        let f = TorusField::random(6, TAU, 0.5, 1, 2, seed);
        let z = TorusField::zeros(6, TAU);
        let at = |t: f64| cs_functional(&z.add_scaled(t, &f));
        let (c1, c2) = (at(1.0), at(2.0));
        let c = (c2 - 4.0 * c1) / 4.0;
        let q = c1 - c;
        let want = s * s * q + s * s * s * c;
        prop_assert!((at(s) - want).abs() < 1e-10 * (q.abs() + c.abs()).max(1e-12));
    }

    #[test]
    fn h1_data_has_trivial_kuranishi_correction(scale in 0.01f64..0.5) {
        let b = [[0.3, -0.1, 0.2], [0.1, 0.25, -0.2], [-0.15, 0.05, 0.3]];
        let c = [[0.2, 0.1, -0.1], [0.05, -0.3, 0.15], [0.1, 0.2, 0.25]];
        let r = kuranishi_w(&ModeVector::h1(1, b, c).scaled(scale), 1e-14).unwrap();
        prop_assert_eq!(r.w_norm, 0.0);
    }
}
