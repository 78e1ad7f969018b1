use kwlab::algebra::{
    basis_sigma, bracket, identity2, inner, l_decompose, l_generator, l_minus_basis, l_plus_basis, matmul, star,
    LieElem, Su2,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn close(a: &LieElem, b: &LieElem, tol: f64) -> bool {
    (*a - *b).max_abs() <= tol
}

fn lie() -> impl Strategy<Value = LieElem> {
    prop::array::uniform6(-2.0f64..2.0).prop_map(|x| {
        LieElem::from_coords([C64::new(x[0], x[1]), C64::new(x[2], x[3]), C64::new(x[4], x[5])])
    })
}

fn su2() -> impl Strategy<Value = Su2> {
    prop::array::uniform3(-2.0f64..2.0).prop_map(Su2)
}

#[test]
fn sigma_squares_to_minus_one() {
    for i in 1..=3 {
        let s = basis_sigma(i).unwrap();
        let p = matmul(&s.entries(), &s.entries());
        let id = identity2();
        for r in 0..2 {
            for c in 0..2 {
                assert!((p[r][c] + id[r][c]).norm() < 1e-15);
            }
        }
    }
}

#[test]
fn sigma_product_table() {
    // σ1σ2 = −σ3 and cyclically; they anticommute.
    let s = |i| basis_sigma(i).unwrap();
    for (a, b, c) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        let p = matmul(&s(a).entries(), &s(b).entries());
        let q = matmul(&s(b).entries(), &s(a).entries());
        let target = (-s(c)).entries();
        for r in 0..2 {
            for k in 0..2 {
                assert!((p[r][k] - target[r][k]).norm() < 1e-15);
                assert!((p[r][k] + q[r][k]).norm() < 1e-15);
            }
        }
        assert!(close(&bracket(&s(a), &s(b)), &s(c).scale_re(-2.0), 1e-15));
    }
}

#[test]
fn sigma_basis_is_orthonormal() {
    for i in 1..=3 {
        for j in 1..=3 {
            let v = inner(&basis_sigma(i).unwrap(), &basis_sigma(j).unwrap());
            assert!((v - if i == j { 1.0 } else { 0.0 }).norm() < 1e-15);
        }
    }
}

#[test]
fn basis_index_out_of_range() {
    assert!(basis_sigma(0).is_err());
    assert!(basis_sigma(4).is_err());
}

#[test]
fn trace_check_on_construction() {
    let mut m = identity2();
    m[0][1] = C64::new(3.0, 0.0);
    assert!(LieElem::from_matrix(m).is_err());
}

#[test]
fn l_eigenvectors() {
    let g = l_generator();
    assert!(close(&bracket(&g, &l_plus_basis()), &l_plus_basis(), 1e-15));
    assert!(close(&bracket(&g, &l_minus_basis()), &-l_minus_basis(), 1e-15));
    assert!(bracket(&g, &basis_sigma(3).unwrap()).max_abs() < 1e-15);
}

#[test]
fn su2_bracket_is_minus_twice_cross() {
    let e = Su2::basis;
    assert_eq!(e(0).bracket(&e(1)).0, [0.0, 0.0, -2.0]);
    assert_eq!(e(1).bracket(&e(2)).0, [-2.0, 0.0, 0.0]);
}

proptest! {
    #[test]
    fn bracket_antisymmetric_and_jacobi(a in lie(), b in lie(), c in lie()) {
        prop_assert!(close(&bracket(&a, &b), &-bracket(&b, &a), 1e-12));
        let j = bracket(&a, &bracket(&b, &c)) + bracket(&b, &bracket(&c, &a)) + bracket(&c, &bracket(&a, &b));
        prop_assert!(j.max_abs() < 1e-10);
    }

    #[test]
    fn inner_is_ad_invariant(x in lie(), u in lie(), v in lie()) {
        let s = inner(&bracket(&x, &u), &v) + inner(&u, &bracket(&x, &v));
        prop_assert!(s.norm() < 1e-10);
    }

    #[test]
    fn decomposition_reconstructs(v in lie()) {
        let d = l_decompose(&v);
        prop_assert!(close(&d.reconstruct(), &v, 1e-13));
        let g = l_generator();
        prop_assert!(close(&bracket(&g, &d.plus), &d.plus, 1e-13));
        prop_assert!(close(&bracket(&g, &d.minus), &-d.minus, 1e-13));
    }

    #[test]
    fn star_is_an_involution_fixing_su2(v in lie(), u in su2()) {
        prop_assert!(close(&star(&star(&v)), &v, 1e-15));
        let w = LieElem::from_su2(u);
        prop_assert!(close(&star(&w), &w, 1e-15));
        prop_assert!(w.is_su2(1e-14));
    }

    #[test]
    fn su2_norm_matches_inner(u in su2()) {
        let w = LieElem::from_su2(u);
        prop_assert!((inner(&w, &w).re - u.norm_sq()).abs() < 1e-12);
        prop_assert!((w.norm_sq() - u.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn lie_bracket_matches_su2_bracket(u in su2(), v in su2()) {
        let l = bracket(&u.to_lie(), &v.to_lie());
        prop_assert!(close(&l, &u.bracket(&v).to_lie(), 1e-12));
    }
}
