use kwlab::clifford::{load_clifford, nahm_pole_endo};
use kwlab::model::ModelSolution;
use kwlab::operator::{
    apply_d, bochner_check, depiction_disagreement, lattice_l_spectrum, y_apply, y_intertwine, Background, Depiction,
    Diff, FnSection, GaussPolySection, Spinor8,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEPICTIONS: [Depiction; 3] = [Depiction::Components, Depiction::Matrix, Depiction::Clifford];

#[test]
fn constant_section_is_harmonic_on_trivial_background() {
    let psi = FnSection(|_: &[f64; 4]| Ok(Spinor8::basis(5)));
    for dep in DEPICTIONS {
        let out = apply_d(&Background::Trivial, &psi, &[1.0, 0.3, 0.2, 0.1], dep, &Diff::new(1e-3, 4)).unwrap();
        assert_eq!(out.max_abs(), 0.0);
    }
}

#[test]
fn linear_section_picks_out_gamma() {
    let cl = load_clifford();
    for dir in 0..3 {
        let psi = FnSection(move |p: &[f64; 4]| Ok(p[dir + 1] * Spinor8::basis(4)));
        let want = Spinor8::basis(4).apply8(&cl.gamma[dir]);
        for dep in DEPICTIONS {
            let got = apply_d(&Background::Trivial, &psi, &[1.0, 0.4, -0.2, 0.7], dep, &Diff::new(1e-2, 4)).unwrap();
            assert!((got - want).max_abs() < 1e-12, "dir {dir} {dep:?}");
        }
    }
}

#[test]
fn constant_section_on_nahm_pole_sees_only_the_endomorphism() {
    let e = nahm_pole_endo(&load_clifford(), 1.5).unwrap();
    for idx in [0, 7, 13, 23] {
        let psi = FnSection(move |_: &[f64; 4]| Ok(Spinor8::basis(idx)));
        let got = apply_d(&Background::Nahm, &psi, &[1.5, 0.2, 0.3, 0.0], Depiction::Clifford, &Diff::new(1e-3, 4)).unwrap();
        assert!((got - Spinor8::basis(idx).apply24(&e)).max_abs() < 1e-14);
    }
}

#[test]
fn lattice_symbol_at_diagonal_mode() {
    let s = lattice_l_spectrum(1);
    let m = s.iter().find(|m| m.k == [1, 1, 0]).unwrap();
    let r2 = 2f64.sqrt();
    assert_eq!(m.eigen.len(), 2);
    assert!((m.eigen[0].0 + r2).abs() < 1e-12 && (m.eigen[1].0 - r2).abs() < 1e-12);
    assert_eq!(m.eigen[0].1 + m.eigen[1].1, 24);
    let zero = s.iter().find(|m| m.k == [0, 0, 0]).unwrap();
    assert_eq!(zero.eigen, vec![(0.0, 24)]);
}

#[test]
fn y_squares_to_minus_one_on_spinors() {
    let mut g = ChaCha8Rng::seed_from_u64(4);
    let s = Spinor8::random(&mut g);
    assert!((y_apply(&y_apply(&s)) + s).max_abs() < 1e-15);
}

#[test]
fn bochner_remainder_on_nahm_pole() {
    let r = bochner_check(&Background::Nahm, &[0.9, 0.4, -0.3, 0.2], 2e-3).unwrap();
    assert!(r.printed_matches() && r.derived_matches(), "{r:?}");
    assert_eq!(r.printed_zero_rows, 0.0);
}

#[test]
fn bochner_expanded_form_on_model_background() {
    let r = bochner_check(&Background::Model(ModelSolution::new(1)), &[0.9, 0.4, -0.3, 0.2], 2e-3).unwrap();
    assert!(r.derived_matches(), "{r:?}");
    assert!(r.printed_symmetry_defect < 1e-10);
}

#[test]
fn background_names_round_trip() {
    for s in ["trivial", "nahm", "model:2"] {
        assert_eq!(Background::parse(s).unwrap().name(), s);
    }
    assert!(Background::parse("model:x").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn depictions_agree(seed in 0u64..1000, t in 0.5f64..2.0, x in -1.0f64..1.0, bg in 0usize..3) {
        let bg = [Background::Trivial, Background::Nahm, Background::Model(ModelSolution::new(2))][bg].clone();
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let p = [t, 0.5 + x, x, 0.3];
        let psi = GaussPolySection::random(&mut g, p, 1.0);
        let d = Diff::new(1e-3, 4);
        prop_assert!(depiction_disagreement(&bg, &psi, &p, &d).unwrap() < 1e-9);
        prop_assert!(y_intertwine(&bg, &psi, &p, &d).unwrap() < 1e-8);
    }
}
