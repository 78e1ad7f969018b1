//! The 8×8 Clifford generators γ1..γ3, ρ1..ρ3 and the constant
//! endomorphisms of ⊕₈ su(2) built from them.
//!
//! Mat8 holds integer entries so the defining relations are checked exactly.
//! Endo24 acts on the 24 real coordinates of a spinor, index 3·r + k for
//! component r (ordered b1 b2 b3 bt c1 c2 c3 ct) and σ-coordinate k.

use crate::algebra::Su2;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

/// Integer 8×8 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mat8(pub [[i32; 8]; 8]);

impl Mat8 {
    pub const ZERO: Mat8 = Mat8([[0; 8]; 8]);

    pub fn identity() -> Mat8 {
        Mat8::scaled_identity(1)
    }

    pub fn scaled_identity(k: i32) -> Mat8 {
        let mut m = [[0; 8]; 8];
        (0..8).for_each(|i| m[i][i] = k);
        Mat8(m)
    }

    pub fn transpose(&self) -> Mat8 {
        let mut m = [[0; 8]; 8];
        for (r, row) in self.0.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m[c][r] = v;
            }
        }
        Mat8(m)
    }

    pub fn trace(&self) -> i32 {
        (0..8).map(|i| self.0[i][i]).sum()
    }

    pub fn is_antisymmetric(&self) -> bool {
        *self == -self.transpose()
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Entries in {−1, 0, 1} with exactly one nonzero per row.
    pub fn is_signed_permutation(&self) -> bool {
        self.0.iter().all(|row| {
            row.iter().all(|v| v.abs() <= 1) && row.iter().filter(|v| **v != 0).count() == 1
        })
    }

    pub fn to_f64(&self) -> [[f64; 8]; 8] {
        let mut m = [[0.0; 8]; 8];
        for r in 0..8 {
            for c in 0..8 {
                m[r][c] = self.0[r][c] as f64;
            }
        }
        m
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(8, 8, |r, c| self.0[r][c] as f64)
    }
}

impl Mul for Mat8 {
    type Output = Mat8;
    fn mul(self, o: Mat8) -> Mat8 {
        let mut m = [[0; 8]; 8];
        for r in 0..8 {
            for c in 0..8 {
                m[r][c] = (0..8).map(|k| self.0[r][k] * o.0[k][c]).sum();
            }
        }
        Mat8(m)
    }
}

impl Add for Mat8 {
    type Output = Mat8;
    fn add(self, o: Mat8) -> Mat8 {
        let mut m = self.0;
        for r in 0..8 {
            for c in 0..8 {
                m[r][c] += o.0[r][c];
            }
        }
        Mat8(m)
    }
}

impl Sub for Mat8 {
    type Output = Mat8;
    fn sub(self, o: Mat8) -> Mat8 {
        self + (-o)
    }
}

impl Neg for Mat8 {
    type Output = Mat8;
    fn neg(self) -> Mat8 {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|v| *v = -*v);
        Mat8(m)
    }
}

const G1: [[i32; 8]; 8] = [
    [0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, -1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -1],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
];
const G2: [[i32; 8]; 8] = [
    [0, 0, 0, 0, 0, 0, -1, 0],
    [0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -1],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
];
const G3: [[i32; 8]; 8] = [
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [-1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, 0, 0, 1, 0],
];
const R1: [[i32; 8]; 8] = [
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [-1, 0, 0, 0, 0, 0, 0, 0],
];
const R2: [[i32; 8]; 8] = [
    [0, 0, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, 0],
    [0, -1, 0, 0, 0, 0, 0, 0],
];
const R3: [[i32; 8]; 8] = [
    [0, 1, 0, 0, 0, 0, 0, 0],
    [-1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0, 0, 0],
];

/// The six generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliffordSet {
    pub gamma: [Mat8; 3],
    pub rho: [Mat8; 3],
}

/// The γ and ρ matrices in the realization used throughout.
pub fn load_clifford() -> CliffordSet {
    CliffordSet { gamma: [Mat8(G1), Mat8(G2), Mat8(G3)], rho: [Mat8(R1), Mat8(R2), Mat8(R3)] }
}

/// Outcome of one exact relation check.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

impl CliffordSet {
    /// All defining relations and structural facts, each checked exactly.
    pub fn relation_checks(&self) -> Vec<RelationCheck> {
        let mut out = Vec::new();
        let id2 = Mat8::scaled_identity(-2);
        let mut push = |name: String, holds: bool| out.push(RelationCheck { name, holds });
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { id2 } else { Mat8::ZERO };
                let (g, r) = (&self.gamma, &self.rho);
                push(format!("g{}g{}+g{}g{}", i + 1, j + 1, j + 1, i + 1), g[i] * g[j] + g[j] * g[i] == target);
                push(format!("r{}r{}+r{}r{}", i + 1, j + 1, j + 1, i + 1), r[i] * r[j] + r[j] * r[i] == target);
                push(format!("g{}r{}+r{}g{}", i + 1, j + 1, j + 1, i + 1), g[i] * r[j] + r[j] * g[i] == Mat8::ZERO);
            }
        }
        for (name, m) in self.named() {
            push(format!("{name} antisymmetric"), m.is_antisymmetric());
            push(format!("{name} traceless"), m.trace() == 0);
            push(format!("{name} signed permutation"), m.is_signed_permutation());
        }
        let r123 = self.rho[0] * self.rho[1] * self.rho[2];
        for i in 0..3 {
            push(format!("r1r2r3 anticommutes with g{}", i + 1), r123 * self.gamma[i] + self.gamma[i] * r123 == Mat8::ZERO);
            push(format!("r1r2r3 commutes with r{}", i + 1), r123 * self.rho[i] == self.rho[i] * r123);
        }
        let y = self.y8();
        push("Y^2 = -1".into(), y * y == -Mat8::identity());
        push("Y matches (ct dt - c, -bt dt + b)".into(), y == y_componentwise());
        out
    }

    pub fn named(&self) -> [(&'static str, Mat8); 6] {
        [
            ("g1", self.gamma[0]),
            ("g2", self.gamma[1]),
            ("g3", self.gamma[2]),
            ("r1", self.rho[0]),
            ("r2", self.rho[1]),
            ("r3", self.rho[2]),
        ]
    }

    /// 𝕐 = γ1γ2γ3ρ1ρ2ρ3.
    pub fn y8(&self) -> Mat8 {
        self.gamma[0] * self.gamma[1] * self.gamma[2] * self.rho[0] * self.rho[1] * self.rho[2]
    }
}


/// The map (bt dt + b, ct dt + c) ↦ (ct dt − c, −bt dt + b) written as a matrix.
pub fn y_componentwise() -> Mat8 {
    let mut m = [[0; 8]; 8];
    // new b_i = -c_i ; new bt = ct ; new c_i = b_i ; new ct = -bt
    for i in 0..3 {
        m[i][4 + i] = -1;
        m[4 + i][i] = 1;
    }
    m[3][7] = 1;
    m[7][3] = -1;
    Mat8(m)
}

/// A real 24×24 endomorphism of ⊕₈ su(2).
#[derive(Clone, Debug, PartialEq)]
pub struct Endo24(pub DMatrix<f64>);

impl Endo24 {
    pub fn zeros() -> Endo24 {
        Endo24(DMatrix::zeros(24, 24))
    }

    pub fn identity() -> Endo24 {
        Endo24(DMatrix::identity(24, 24))
    }

    /// M8 ⊗ M3 acting as (M8 ⊗ M3)[3r+k, 3c+l] = M8[r,c] · M3[k,l].
    pub fn kron(m8: &[[f64; 8]; 8], m3: &[[f64; 3]; 3]) -> Endo24 {
        Endo24(DMatrix::from_fn(24, 24, |i, j| m8[i / 3][j / 3] * m3[i % 3][j % 3]))
    }

    /// M8 ⊗ id.
    pub fn lift(m8: &Mat8) -> Endo24 {
        Endo24::kron(&m8.to_f64(), &IDENTITY3)
    }

    /// M8 ⊗ ad(u).
    pub fn kron_ad(m8: &Mat8, u: &Su2) -> Endo24 {
        Endo24::kron(&m8.to_f64(), &u.ad_matrix())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        (&self.0 + self.0.transpose()).amax()
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.0 - self.0.transpose()).amax()
    }

    /// Eigenvalues of a symmetric matrix, ascending.
    pub fn symmetric_spectrum(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.0.clone()).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Imaginary parts of the eigenvalues of an antisymmetric matrix, from the
    /// real Schur form, ascending.
    pub fn antisymmetric_spectrum(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.0.clone().complex_eigenvalues().iter().map(|z| z.im).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// 3×3 block (r, c) of the matrix.
    pub fn block(&self, r: usize, c: usize) -> [[f64; 3]; 3] {
        let mut b = [[0.0; 3]; 3];
        for k in 0..3 {
            for l in 0..3 {
                b[k][l] = self.0[(3 * r + k, 3 * c + l)];
            }
        }
        b
    }
}

impl Add for &Endo24 {
    type Output = Endo24;
    fn add(self, o: &Endo24) -> Endo24 {
        Endo24(&self.0 + &o.0)
    }
}

impl Sub for &Endo24 {
    type Output = Endo24;
    fn sub(self, o: &Endo24) -> Endo24 {
        Endo24(&self.0 - &o.0)
    }
}

impl Mul for &Endo24 {
    type Output = Endo24;
    fn mul(self, o: &Endo24) -> Endo24 {
        Endo24(&self.0 * &o.0)
    }
}

pub const IDENTITY3: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Q = ρ1ρ2 − [σ3, ·].
pub fn q_endo(c: &CliffordSet) -> Endo24 {
    let a = Endo24::lift(&(c.rho[0] * c.rho[1]));
    let b = Endo24::kron(&Mat8::identity().to_f64(), &Su2::basis(2).ad_matrix());
    &a - &b
}

/// L ψ = −ρ1ρ2γ3(−ψ0 σ3 + ψ⊥) where ψ0 is the σ3 component.
pub fn l_endo(c: &CliffordSet) -> Endo24 {
    let m = -(c.rho[0] * c.rho[1] * c.gamma[2]);
    let flip = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
    Endo24::kron(&m.to_f64(), &flip)
}

/// 𝕐 ⊗ id on the 24 coordinates.
pub fn y_endo(c: &CliffordSet) -> Endo24 {
    Endo24::lift(&c.y8())
}

/// U = (t + z1γ1 + z2γ2)/x, an orthogonal 8×8 matrix off the origin.
pub fn u_matrix(c: &CliffordSet, t: f64, z1: f64, z2: f64) -> Result<[[f64; 8]; 8]> {
    let x = (t * t + z1 * z1 + z2 * z2).sqrt();
    if x == 0.0 {
        return Err(Error::ZeroPoint);
    }
    let (g1, g2) = (c.gamma[0].to_f64(), c.gamma[1].to_f64());
    let mut u = [[0.0; 8]; 8];
    for r in 0..8 {
        for k in 0..8 {
            let id = if r == k { t } else { 0.0 };
            u[r][k] = (id + z1 * g1[r][k] + z2 * g2[r][k]) / x;
        }
    }
    Ok(u)
}

/// The constant endomorphisms Q, L, 𝕐.
#[derive(Clone, Debug)]
pub struct DerivedEndos {
    pub q: Endo24,
    pub l: Endo24,
    pub y: Mat8,
}

pub fn derived_endos(c: &CliffordSet) -> DerivedEndos {
    DerivedEndos { q: q_endo(c), l: l_endo(c), y: c.y8() }
}

/// ρ_i [𝔞_i, ·] for the Nahm pole 𝔞_i = −σ_i/(2t).
pub fn nahm_pole_endo(c: &CliffordSet, t: f64) -> Result<Endo24> {
    if t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let mut e = Endo24::zeros();
    for i in 0..3 {
        let a = (-0.5 / t) * Su2::basis(i);
        e = &e + &Endo24::kron_ad(&c.rho[i], &a);
    }
    Ok(e)
}

/// Distinct values of a sorted spectrum (merged within `tol`) with multiplicities.
pub fn cluster(spectrum: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in spectrum {
        match out.last_mut() {
            Some((c, n)) if (v - *c).abs() <= tol => {
                *c = (*c * *n as f64 + v) / (*n as f64 + 1.0);
                *n += 1;
            }
            _ => out.push((v, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_relation_holds() {
        for chk in load_clifford().relation_checks() {
            assert!(chk.holds, "{}", chk.name);
        }
    }

    #[test]
    fn cluster_merges_within_tolerance() {
        let c = cluster(&[-1.0, -1.0 + 1e-13, 2.0], 1e-10);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 2);
    }
}
