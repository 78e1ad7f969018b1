//! su(2) and sl(2,C) arithmetic.
//!
//! The basis is σk = i·(Pauli k), so that σ1σ2 = −σ3, σk² = −1 and
//! [σi, σj] = −2 ε_ijk σk. The inner product is −½ tr(uv), the Hermitian
//! star is v ↦ −v†.
//!
//! With this realization [σ3, σ1 − iσ2] = −2i (σ1 − iσ2), so φ = σ1 − iσ2 is a
//! +1 eigenvector of ad((i/2)σ3), not of ad(½σ3). The splitting
//! sl(2,C) = L⁺ ⊕ Cσ3 ⊕ L⁻ uses ad((i/2)σ3) throughout; see [`l_generator`].

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

pub type Mat2 = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// An element of sl(2,C): a trace-free 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LieElem {
    m: Mat2,
}

impl LieElem {
    pub const ZERO: LieElem = LieElem { m: [[ZERO, ZERO], [ZERO, ZERO]] };

    /// Wraps a matrix, rejecting it if the trace exceeds 1e-12.
    pub fn from_matrix(m: Mat2) -> Result<Self> {
        let tr = (m[0][0] + m[1][1]).norm();
        if tr > 1e-12 {
            return Err(Error::NotTraceFree(tr));
        }
        Ok(LieElem { m })
    }

    /// Σ w_k σ_k with complex coefficients.
    pub fn from_coords(w: [C64; 3]) -> Self {
        // σ1 = i[[0,1],[1,0]], σ2 = i[[0,-i],[i,0]] = [[0,1],[-1,0]], σ3 = i[[1,0],[0,-1]]
        let m = [
            [I * w[2], I * w[0] + w[1]],
            [I * w[0] - w[1], -I * w[2]],
        ];
        LieElem { m }
    }

    pub fn from_su2(u: Su2) -> Self {
        Self::from_coords([u.0[0].into(), u.0[1].into(), u.0[2].into()])
    }

    pub fn entries(&self) -> Mat2 {
        self.m
    }

    /// Complex coordinates w_k = ⟨σ_k, v⟩, so v = Σ w_k σ_k.
    pub fn coords(&self) -> [C64; 3] {
        let m = &self.m;
        // Inverting from_coords.
        let w3 = -I * m[0][0];
        let w1 = -I * (m[0][1] + m[1][0]) * 0.5;
        let w2 = (m[0][1] - m[1][0]) * 0.5;
        [w1, w2, w3]
    }

    /// The su(2) coordinates, if the element is anti-Hermitian to `tol`.
    pub fn to_su2(&self, tol: f64) -> Option<Su2> {
        let w = self.coords();
        if w.iter().all(|c| c.im.abs() <= tol) {
            Some(Su2([w[0].re, w[1].re, w[2].re]))
        } else {
            None
        }
    }

    /// Real part in the su(2) sense: (v + v*)/2.
    pub fn su2_part(&self) -> Su2 {
        let w = self.coords();
        Su2([w[0].re, w[1].re, w[2].re])
    }

    /// Imaginary part in the su(2) sense: (v − v*)/(2i).
    pub fn isu2_part(&self) -> Su2 {
        let w = self.coords();
        Su2([w[0].im, w[1].im, w[2].im])
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn is_su2(&self, tol: f64) -> bool {
        let d = *self + self.dagger();
        d.max_abs() <= tol
    }

    pub fn dagger(&self) -> LieElem {
        let m = &self.m;
        LieElem { m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]] }
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// |v|² = ½ tr(v v†); agrees with ⟨v, v⟩ on su(2).
    pub fn norm_sq(&self) -> f64 {
        0.5 * self.m.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: C64) -> LieElem {
        let mut m = self.m;
        m.iter_mut().flatten().for_each(|c| *c *= s);
        LieElem { m }
    }

    pub fn scale_re(&self, s: f64) -> LieElem {
        self.scale(C64::new(s, 0.0))
    }

    /// Plain matrix product (not trace-free in general).
    pub fn matmul(&self, other: &LieElem) -> Mat2 {
        matmul(&self.m, &other.m)
    }
}

impl Add for LieElem {
    type Output = LieElem;
    fn add(self, o: LieElem) -> LieElem {
        let mut m = self.m;
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] += o.m[r][c];
            }
        }
        LieElem { m }
    }
}

impl Sub for LieElem {
    type Output = LieElem;
    fn sub(self, o: LieElem) -> LieElem {
        self + o.scale_re(-1.0)
    }
}

impl Neg for LieElem {
    type Output = LieElem;
    fn neg(self) -> LieElem {
        self.scale_re(-1.0)
    }
}

impl Mul<LieElem> for C64 {
    type Output = LieElem;
    fn mul(self, v: LieElem) -> LieElem {
        v.scale(self)
    }
}

impl Mul<LieElem> for f64 {
    type Output = LieElem;
    fn mul(self, v: LieElem) -> LieElem {
        v.scale_re(self)
    }
}

pub fn matmul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// σ_i for i ∈ {1, 2, 3}.
pub fn basis_sigma(i: usize) -> Result<LieElem> {
    if !(1..=3).contains(&i) {
        return Err(Error::BasisIndex(i));
    }
    let mut w = [ZERO; 3];
    w[i - 1] = ONE;
    Ok(LieElem::from_coords(w))
}

pub(crate) fn sigma(i: usize) -> LieElem {
    basis_sigma(i).expect("index in range")
}

/// −½ tr(uv).
pub fn inner(u: &LieElem, v: &LieElem) -> C64 {
    let p = u.matmul(v);
    -(p[0][0] + p[1][1]) * 0.5
}

/// uv − vu.
pub fn bracket(u: &LieElem, v: &LieElem) -> LieElem {
    let a = u.matmul(v);
    let b = v.matmul(u);
    let mut m = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = a[r][c] - b[r][c];
        }
    }
    LieElem { m }
}

/// v* = −v†.
pub fn star(v: &LieElem) -> LieElem {
    -v.dagger()
}

/// The element whose adjoint action has L⁺ as its +1 eigenspace: (i/2)σ3.
pub fn l_generator() -> LieElem {
    sigma(3).scale(C64::new(0.0, 0.5))
}

/// Spanning vector of L⁺: σ1 − iσ2.
pub fn l_plus_basis() -> LieElem {
    LieElem::from_coords([ONE, -I, ZERO])
}

/// Spanning vector of L⁻: σ1 + iσ2.
pub fn l_minus_basis() -> LieElem {
    LieElem::from_coords([ONE, I, ZERO])
}

/// Decomposition along sl(2,C) = L⁺ ⊕ Cσ3 ⊕ L⁻.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LDecomp {
    pub plus: LieElem,
    pub zero: C64,
    pub minus: LieElem,
}

impl LDecomp {
    pub fn reconstruct(&self) -> LieElem {
        self.plus + sigma(3).scale(self.zero) + self.minus
    }
}

/// Splits `v` into ad((i/2)σ3) eigencomponents with eigenvalues +1, 0, −1.
pub fn l_decompose(v: &LieElem) -> LDecomp {
    let [w1, w2, w3] = v.coords();
    let p = (w1 + I * w2) * 0.5;
    let q = (w1 - I * w2) * 0.5;
    LDecomp { plus: l_plus_basis().scale(p), zero: w3, minus: l_minus_basis().scale(q) }
}

/// su(2) element in real coordinates on the orthonormal basis {σ1, σ2, σ3}.
///
/// In these coordinates ⟨u, v⟩ = u·v and [u, v] = −2 u×v.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Su2(pub [f64; 3]);

impl Su2 {
    pub const ZERO: Su2 = Su2([0.0; 3]);

    pub fn basis(k: usize) -> Su2 {
        let mut v = [0.0; 3];
        v[k] = 1.0;
        Su2(v)
    }

    #[inline]
    pub fn dot(&self, o: &Su2) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// [self, o].
    #[inline]
    pub fn bracket(&self, o: &Su2) -> Su2 {
        let (a, b) = (&self.0, &o.0);
        Su2([
            -2.0 * (a[1] * b[2] - a[2] * b[1]),
            -2.0 * (a[2] * b[0] - a[0] * b[2]),
            -2.0 * (a[0] * b[1] - a[1] * b[0]),
        ])
    }

    /// Matrix of ad(self) = [self, ·] in the σ coordinates.
    pub fn ad_matrix(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for j in 0..3 {
            let col = self.bracket(&Su2::basis(j));
            for l in 0..3 {
                m[l][j] = col.0[l];
            }
        }
        m
    }

    pub fn to_lie(&self) -> LieElem {
        LieElem::from_su2(*self)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Add for Su2 {
    type Output = Su2;
    #[inline]
    fn add(self, o: Su2) -> Su2 {
        Su2([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Su2 {
    type Output = Su2;
    #[inline]
    fn sub(self, o: Su2) -> Su2 {
        Su2([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Su2 {
    type Output = Su2;
    #[inline]
    fn neg(self) -> Su2 {
        Su2([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<Su2> for f64 {
    type Output = Su2;
    #[inline]
    fn mul(self, v: Su2) -> Su2 {
        Su2([self * v.0[0], self * v.0[1], self * v.0[2]])
    }
}

impl AddAssign for Su2 {
    #[inline]
    fn add_assign(&mut self, o: Su2) {
        for k in 0..3 {
            self.0[k] += o.0[k];
        }
    }
}

impl SubAssign for Su2 {
    #[inline]
    fn sub_assign(&mut self, o: Su2) {
        for k in 0..3 {
            self.0[k] -= o.0[k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &LieElem, b: &LieElem) -> bool {
        (*a - *b).max_abs() < 1e-14
    }

    #[test]
    fn coords_roundtrip() {
        let w = [C64::new(0.3, -1.0), C64::new(2.0, 0.5), C64::new(-0.7, 0.1)];
        let v = LieElem::from_coords(w);
        let back = v.coords();
        for k in 0..3 {
            assert!((back[k] - w[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn su2_bracket_matches_matrix_bracket() {
        let u = Su2([0.3, -1.2, 0.8]);
        let v = Su2([1.1, 0.4, -0.5]);
        let m = bracket(&u.to_lie(), &v.to_lie());
        assert!(close(&m, &u.bracket(&v).to_lie()));
        assert!((inner(&u.to_lie(), &v.to_lie()).re - u.dot(&v)).abs() < 1e-15);
    }

    #[test]
    fn realization_is_i_times_pauli() {
        let s1 = sigma(1).entries();
        assert_eq!(s1[0][1], I);
        assert_eq!(s1[1][0], I);
        let s2 = sigma(2).entries();
        assert_eq!(s2[0][1], ONE);
        assert_eq!(s2[1][0], -ONE);
        let s3 = sigma(3).entries();
        assert_eq!(s3[0][0], I);
        assert_eq!(s3[1][1], -I);
    }
}
