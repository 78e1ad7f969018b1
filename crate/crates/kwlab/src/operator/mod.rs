//! The linearized operator 𝒟 = ∇t + γi∇i + ρi[𝔞i, ·] acting on sections of
//! ⊕₈ su(2), its adjoint, and the identities it satisfies.
//!
//! Points are `[t, x1, x2, x3]`. On model backgrounds x1, x2 are z1, z2 and
//! x3 is the circle coordinate. Covariant derivatives are ∇_i = ∂_i + [A_i, ·]
//! and ∇t = ∂t (the connection has no dt component in temporal gauge).

mod bochner;
mod identities;
mod section;

pub use bochner::{bochner_apply, bochner_check, derived_x, printed_x, BochnerReport, BochnerTerms};
pub use identities::{
    duality_defect, lattice_l_spectrum, omega_apply, pythagoras_defect, spatial_identification, xi_apply,
    xi_scale_defect, y_intertwine, ModeSpectrum,
};
pub use section::{Diff, FnSection, GaussPolySection, Section, TrigSection};

use crate::algebra::Su2;
use crate::clifford::{load_clifford, CliffordSet, Endo24, Mat8};
use crate::error::{Error, Result};
use crate::model::{FieldPoint, ModelSolution};
use crate::util::EPS;
use rand::Rng;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};
use std::sync::OnceLock;

pub type Pt = [f64; 4];

pub(crate) fn clifford() -> &'static CliffordSet {
    static C: OnceLock<CliffordSet> = OnceLock::new();
    C.get_or_init(load_clifford)
}

/// Eight su(2) components ordered (b1, b2, b3, bt, c1, c2, c3, ct).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Spinor8(pub [Su2; 8]);

pub const B1: usize = 0;
pub const BT: usize = 3;
pub const C1: usize = 4;
pub const CT: usize = 7;

impl Spinor8 {
    pub const ZERO: Spinor8 = Spinor8([Su2::ZERO; 8]);

    /// The constant spinor with a single nonzero real coordinate 3·r + k.
    pub fn basis(idx: usize) -> Spinor8 {
        let mut s = Spinor8::ZERO;
        s.0[idx / 3].0[idx % 3] = 1.0;
        s
    }

    pub fn from_vec(v: &[f64]) -> Spinor8 {
        let mut s = Spinor8::ZERO;
        for (i, x) in v.iter().take(24).enumerate() {
            s.0[i / 3].0[i % 3] = *x;
        }
        s
    }

    pub fn to_vec(&self) -> [f64; 24] {
        let mut v = [0.0; 24];
        for i in 0..24 {
            v[i] = self.0[i / 3].0[i % 3];
        }
        v
    }

    pub fn dot(&self, o: &Spinor8) -> f64 {
        self.0.iter().zip(&o.0).map(|(a, b)| a.dot(b)).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(Su2::max_abs).fold(0.0, f64::max)
    }

    /// M ψ with M acting on the 8-component index.
    pub fn apply8(&self, m: &Mat8) -> Spinor8 {
        let mut out = Spinor8::ZERO;
        for r in 0..8 {
            for c in 0..8 {
                let k = m.0[r][c];
                if k != 0 {
                    out.0[r] += (k as f64) * self.0[c];
                }
            }
        }
        out
    }

    pub fn apply_real8(&self, m: &[[f64; 8]; 8]) -> Spinor8 {
        let mut out = Spinor8::ZERO;
        for r in 0..8 {
            for c in 0..8 {
                out.0[r] += m[r][c] * self.0[c];
            }
        }
        out
    }

    pub fn apply24(&self, e: &Endo24) -> Spinor8 {
        let v = self.to_vec();
        let mut w = [0.0; 24];
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = (0..24).map(|j| e.0[(i, j)] * v[j]).sum();
        }
        Spinor8::from_vec(&w)
    }

    /// [u, ψ] componentwise.
    pub fn ad(&self, u: &Su2) -> Spinor8 {
        Spinor8(self.0.map(|c| u.bracket(&c)))
    }

    pub fn random<R: Rng>(g: &mut R) -> Spinor8 {
        let mut s = Spinor8::ZERO;
        s.0.iter_mut().for_each(|c| c.0.iter_mut().for_each(|x| *x = g.random_range(-1.0..1.0)));
        s
    }
}

impl Index<usize> for Spinor8 {
    type Output = Su2;
    fn index(&self, i: usize) -> &Su2 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Spinor8 {
    fn index_mut(&mut self, i: usize) -> &mut Su2 {
        &mut self.0[i]
    }
}

impl Add for Spinor8 {
    type Output = Spinor8;
    fn add(mut self, o: Spinor8) -> Spinor8 {
        self += o;
        self
    }
}

impl AddAssign for Spinor8 {
    fn add_assign(&mut self, o: Spinor8) {
        for i in 0..8 {
            self.0[i] += o.0[i];
        }
    }
}

impl Sub for Spinor8 {
    type Output = Spinor8;
    fn sub(self, o: Spinor8) -> Spinor8 {
        self + (-o)
    }
}

impl Neg for Spinor8 {
    type Output = Spinor8;
    fn neg(self) -> Spinor8 {
        Spinor8(self.0.map(|c| -c))
    }
}

impl Mul<Spinor8> for f64 {
    type Output = Spinor8;
    fn mul(self, s: Spinor8) -> Spinor8 {
        Spinor8(s.0.map(|c| self * c))
    }
}

/// Connection and Higgs components at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BgFields {
    pub conn: [Su2; 3],
    pub higgs: [Su2; 3],
}

/// A smooth periodic pair (A, 𝔞) on the side-2π torus, independent of t:
/// each component is a finite sum of Su2 amplitudes times cos(k·x + phase).
#[derive(Clone, Debug, PartialEq)]
pub struct TrigField {
    /// (k, phase, amplitude) terms for A_1..A_3 then 𝔞_1..𝔞_3.
    pub terms: [Vec<([i32; 3], f64, Su2)>; 6],
}

impl TrigField {
    pub fn random<R: Rng>(g: &mut R, modes: usize, amp: f64) -> TrigField {
        let terms = std::array::from_fn(|_| {
            (0..modes)
                .map(|_| {
                    let k = [g.random_range(-2..=2), g.random_range(-2..=2), g.random_range(-2..=2)];
                    let ph = g.random_range(0.0..std::f64::consts::TAU);
                    let a = Su2([g.random_range(-amp..amp), g.random_range(-amp..amp), g.random_range(-amp..amp)]);
                    (k, ph, a)
                })
                .collect()
        });
        TrigField { terms }
    }

    fn component(&self, c: usize, p: &Pt) -> Su2 {
        let mut s = Su2::ZERO;
        for (k, ph, a) in &self.terms[c] {
            let arg = k[0] as f64 * p[1] + k[1] as f64 * p[2] + k[2] as f64 * p[3] + ph;
            s += arg.cos() * *a;
        }
        s
    }
}

/// The background pair (A, 𝔞) on which 𝒟 is linearized.
#[derive(Clone, Debug, PartialEq)]
pub enum Background {
    Trivial,
    Nahm,
    Model(ModelSolution),
    Torus(TrigField),
}

impl Background {
    pub fn fields(&self, p: &Pt) -> Result<BgFields> {
        match self {
            Background::Trivial => Ok(BgFields::default()),
            Background::Nahm => {
                if p[0] <= 0.0 {
                    return Err(Error::NonPositiveTime(p[0]));
                }
                let c = -0.5 / p[0];
                Ok(BgFields { conn: [Su2::ZERO; 3], higgs: [0, 1, 2].map(|i| c * Su2::basis(i)) })
            }
            Background::Model(ms) => {
                let fp = to_field_point(p);
                Ok(BgFields { conn: ms.connection(&fp)?, higgs: ms.higgs(&fp)? })
            }
            Background::Torus(tf) => Ok(BgFields {
                conn: [0, 1, 2].map(|c| tf.component(c, p)),
                higgs: [0, 1, 2].map(|c| tf.component(3 + c, p)),
            }),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Background::Trivial => "trivial".into(),
            Background::Nahm => "nahm".into(),
            Background::Model(ms) => format!("model:{}", ms.m),
            Background::Torus(_) => "torus".into(),
        }
    }

    /// Parses `trivial`, `nahm` or `model:<m>`.
    pub fn parse(s: &str) -> Result<Background> {
        match s {
            "trivial" => Ok(Background::Trivial),
            "nahm" => Ok(Background::Nahm),
            _ => s
                .strip_prefix("model:")
                .and_then(|m| m.parse::<u32>().ok())
                .map(|m| Background::Model(ModelSolution::new(m)))
                .ok_or_else(|| Error::InvalidArgument(format!("unknown background '{s}'"))),
        }
    }
}

pub(crate) fn to_field_point(p: &Pt) -> FieldPoint {
    FieldPoint { t: p[0], z1: p[1], z2: p[2], x3: p[3] }
}

/// Which of the three equivalent forms of 𝒟 to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depiction {
    /// Component formulas for (p, pt, q, qt).
    Components,
    /// The 8×8 table of derivative and commutator slots.
    Matrix,
    /// ∇t + γi∇i + ρi[𝔞i, ·].
    Clifford,
}

/// Derivative data of ψ at a point: covariant derivatives
/// ∇_μψ for μ = t, 1, 2, 3, and the commutators [𝔞_i, ψ].
pub(crate) struct Jet {
    pub nab: [Spinor8; 4],
    pub ad: [Spinor8; 3],
}

pub(crate) fn jet(bg: &Background, psi: &dyn Section, p: &Pt, d: &Diff) -> Result<Jet> {
    let f = bg.fields(p)?;
    let v = psi.eval(p)?;
    let mut nab = [Spinor8::ZERO; 4];
    for (mu, n) in nab.iter_mut().enumerate() {
        *n = psi.partial(p, mu, d)?;
        if mu > 0 {
            *n += v.ad(&f.conn[mu - 1]);
        }
    }
    Ok(Jet { nab, ad: [0, 1, 2].map(|i| v.ad(&f.higgs[i])) })
}

/// One slot of the 8×8 table: ∂t, ±∇_i, ±[𝔞_i, ·] or nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Z,
    T,
    N(usize, i8),
    A(usize, i8),
}

use Slot::{A, N, T, Z};

#[rustfmt::skip]
const TABLE: [[Slot; 8]; 8] = [
    [T, A(3, 1), A(2, -1), N(1, -1), Z, N(3, 1), N(2, -1), A(1, 1)],
    [A(3, -1), T, A(1, 1), N(2, -1), N(3, -1), Z, N(1, 1), A(2, 1)],
    [A(2, 1), A(1, -1), T, N(3, -1), N(2, 1), N(1, -1), Z, A(3, 1)],
    [N(1, 1), N(2, 1), N(3, 1), T, A(1, 1), A(2, 1), A(3, 1), Z],
    [Z, N(3, 1), N(2, -1), A(1, -1), T, A(3, -1), A(2, 1), N(1, -1)],
    [N(3, -1), Z, N(1, 1), A(2, -1), A(3, 1), T, A(1, -1), N(2, -1)],
    [N(2, 1), N(1, -1), Z, A(3, -1), A(2, -1), A(1, 1), T, N(3, -1)],
    [A(1, -1), A(2, -1), A(3, -1), Z, N(1, 1), N(2, 1), N(3, 1), T],
];

fn from_jet(j: &Jet, dep: Depiction) -> Spinor8 {
    match dep {
        Depiction::Clifford => {
            let c = clifford();
            let mut out = j.nab[0];
            for i in 0..3 {
                out += j.nab[i + 1].apply8(&c.gamma[i]);
                out += j.ad[i].apply8(&c.rho[i]);
            }
            out
        }
        Depiction::Matrix => {
            let mut out = Spinor8::ZERO;
            for (r, row) in TABLE.iter().enumerate() {
                for (c, slot) in row.iter().enumerate() {
                    out[r] += match *slot {
                        Z => Su2::ZERO,
                        T => j.nab[0][c],
                        N(i, s) => (s as f64) * j.nab[i][c],
                        A(i, s) => (s as f64) * j.ad[i - 1][c],
                    };
                }
            }
            out
        }
        Depiction::Components => components(j),
    }
}

/// p_k = ∇t b_k − ∇_k bt − ε_kij ∇_i c_j − ε_kij [b_i, 𝔞_j] + [𝔞_k, ct]
/// pt  = ∇t bt + ∇_i b_i + [𝔞_i, c_i]
/// q_k = ∇t c_k − ∇_k ct − ε_kij ∇_i b_j + ε_kij [c_i, 𝔞_j] − [𝔞_k, bt]
/// qt  = ∇t ct + ∇_i c_i − [𝔞_i, b_i]
fn components(j: &Jet) -> Spinor8 {
    let (n, ad) = (&j.nab, &j.ad);
    let mut out = Spinor8::ZERO;
    for k in 0..3 {
        let mut p = n[0][B1 + k] - n[k + 1][BT] + ad[k][CT];
        let mut q = n[0][C1 + k] - n[k + 1][CT] - ad[k][BT];
        for i in 0..3 {
            for jj in 0..3 {
                let e = EPS[k][i][jj];
                if e != 0.0 {
                    // [b_i, 𝔞_j] = −[𝔞_j, b_i]
                    p += e * (-n[i + 1][C1 + jj] + ad[jj][B1 + i]);
                    q += e * (-n[i + 1][B1 + jj] - ad[jj][C1 + i]);
                }
            }
        }
        out[B1 + k] = p;
        out[C1 + k] = q;
    }
    let mut pt = n[0][BT];
    let mut qt = n[0][CT];
    for i in 0..3 {
        pt += n[i + 1][B1 + i] + ad[i][C1 + i];
        qt += n[i + 1][C1 + i] - ad[i][B1 + i];
    }
    out[BT] = pt;
    out[CT] = qt;
    out
}

/// 𝒟ψ at p.
pub fn apply_d(bg: &Background, psi: &dyn Section, p: &Pt, dep: Depiction, d: &Diff) -> Result<Spinor8> {
    Ok(from_jet(&jet(bg, psi, p, d)?, dep))
}

/// 𝒟†ψ = −∇tψ + γi∇iψ + ρi[𝔞i, ψ] at p.
pub fn apply_d_dagger(bg: &Background, psi: &dyn Section, p: &Pt, d: &Diff) -> Result<Spinor8> {
    let j = jet(bg, psi, p, d)?;
    let c = clifford();
    let mut out = -j.nab[0];
    for i in 0..3 {
        out += j.nab[i + 1].apply8(&c.gamma[i]);
        out += j.ad[i].apply8(&c.rho[i]);
    }
    Ok(out)
}

/// The spatial part 𝔏ψ = γi∇iψ + ρi[𝔞i, ψ].
pub fn apply_l(bg: &Background, psi: &dyn Section, p: &Pt, d: &Diff) -> Result<Spinor8> {
    let j = jet(bg, psi, p, d)?;
    Ok(from_jet(&j, Depiction::Clifford) - j.nab[0])
}

/// Largest pairwise relative difference between the three depictions.
pub fn depiction_disagreement(bg: &Background, psi: &dyn Section, p: &Pt, d: &Diff) -> Result<f64> {
    let j = jet(bg, psi, p, d)?;
    let m = from_jet(&j, Depiction::Matrix);
    let c = from_jet(&j, Depiction::Clifford);
    let k = from_jet(&j, Depiction::Components);
    let scale = m.max_abs().max(1.0);
    Ok((m - c).max_abs().max((m - k).max_abs()) / scale)
}

/// 𝕐ψ = γ1γ2γ3ρ1ρ2ρ3 ψ.
pub fn y_apply(psi: &Spinor8) -> Spinor8 {
    psi.apply8(&clifford().y8())
}
