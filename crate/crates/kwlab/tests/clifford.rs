use kwlab::clifford::{cluster, derived_endos, load_clifford, nahm_pole_endo, u_matrix, y_componentwise, Endo24, Mat8};
use proptest::prelude::*;

#[test]
fn every_relation_holds_exactly() {
    let checks = load_clifford().relation_checks();
    assert!(!checks.is_empty());
    for c in &checks {
        assert!(c.holds, "{}", c.name);
    }
}

#[test]
fn named_matrices_are_signed_permutations() {
    for (name, m) in load_clifford().named() {
        assert!(m.is_signed_permutation(), "{name}");
    }
}

#[test]
fn y_squares_to_minus_one_and_matches_components() {
    let cl = load_clifford();
    let y = cl.y8();
    assert_eq!(y * y, -Mat8::identity());
    assert_eq!(y, y_componentwise());
    assert!(y.is_antisymmetric());
}

#[test]
fn nahm_pole_spectrum_at_unit_time() {
    let spec = nahm_pole_endo(&load_clifford(), 1.0).unwrap().symmetric_spectrum();
    let cl = cluster(&spec, 1e-9);
    let values: Vec<(i64, usize)> = cl.iter().map(|(v, n)| (v.round() as i64, *n)).collect();
    assert_eq!(values, vec![(-2, 4), (-1, 8), (1, 8), (2, 4)]);
    for (v, _) in cl {
        assert!((v - v.round()).abs() < 1e-12);
    }
}

#[test]
fn nahm_pole_scales_inversely_with_time() {
    let cl = load_clifford();
    let a = nahm_pole_endo(&cl, 1.0).unwrap();
    let b = nahm_pole_endo(&cl, 4.0).unwrap();
    let diff = Endo24(&b.0 * 4.0 - &a.0);
    assert!(diff.max_abs() < 1e-14);
    assert!(nahm_pole_endo(&cl, 0.0).is_err());
}

#[test]
fn q_l_y_structure() {
    let d = derived_endos(&load_clifford());
    assert!(d.q.antisymmetry_defect() < 1e-14);
    let q = cluster(&d.q.antisymmetric_spectrum(), 1e-9);
    let q: Vec<i64> = q.iter().map(|(v, _)| v.round() as i64).collect();
    assert_eq!(q, vec![-3, -1, 1, 3]);
    assert_eq!((&(&d.l * &d.l) - &Endo24::identity()).max_abs(), 0.0);
    let comm = &(&d.q * &d.l) - &(&d.l * &d.q);
    assert!(comm.max_abs() < 1e-14);
}

proptest! {
    #[test]
    fn u_is_orthogonal(t in 0.1f64..3.0, z1 in -2.0f64..2.0, z2 in -2.0f64..2.0) {
        prop_assume!(z1.hypot(z2) > 1e-3);
        let u = u_matrix(&load_clifford(), t, z1, z2).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let s: f64 = (0..8).map(|k| u[i][k] * u[j][k]).sum();
                let delta = if i == j { 1.0 } else { 0.0 };
                prop_assert!((s - delta).abs() < 1e-12);
            }
        }
    }
}
