//! The gradient flow ∂t(A, 𝔞) = ∇f on a flat 3-torus of side L, where
//! f = cs = ∫⟨𝔞 ∧ B_A − ⅓ 𝔞∧𝔞∧𝔞⟩ and ∇f = (*d_A𝔞, B_A − *(𝔞∧𝔞)).
//!
//! Fields live on an N³ grid; spatial derivatives are fourth-order centered
//! differences. These are antisymmetric on the periodic grid, so the
//! discrete ∇f is the exact gradient of the discrete cs.

mod fit;
mod modes;
mod run;

pub use fit::{lojasiewicz_fit, DecayModel, LojasiewiczFit};
pub use modes::{
    kuranishi_fixed_point, kuranishi_w, l_symbol, linearized_decay, sharp, DecayTrace, KuranishiResult, ModeVector,
};
pub use run::{run_flow, FlowConfig, FlowParams, FlowStatus, FlowTrace, InitKind, InitSpec};

use crate::algebra::Su2;
use crate::util::{rng, EPS};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

/// (A, 𝔞) on an N³ periodic grid; point (i, j, k) is stored at (i·N + j)·N + k
/// with i along x1.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusField {
    pub n: usize,
    pub l: f64,
    pub conn: Vec<[Su2; 3]>,
    pub higgs: Vec<[Su2; 3]>,
}

/// Pointwise data derived from a field.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Local {
    pub b: [Su2; 3],
    /// *d_A𝔞, the A-component of ∇f.
    pub grad_conn: [Su2; 3],
    /// B_A − *(𝔞∧𝔞), the 𝔞-component of ∇f.
    pub grad_higgs: [Su2; 3],
    /// d_A*𝔞 = Σ ∇_i 𝔞_i.
    pub div: Su2,
    pub cs_density: f64,
}

/// Scalar summaries of a field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Monitors {
    pub cs: f64,
    /// ∫ |B − *(𝔞∧𝔞)|² + |d_A𝔞|².
    pub grad_norm_sq: f64,
    /// ‖d_A*𝔞‖ in L².
    pub constraint: f64,
    pub sup_a: f64,
    pub sup_conn: f64,
}

impl TorusField {
    pub fn zeros(n: usize, l: f64) -> TorusField {
        let z = [Su2::ZERO; 3];
        TorusField { n, l, conn: vec![z; n * n * n], higgs: vec![z; n * n * n] }
    }

    pub fn h(&self) -> f64 {
        self.l / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.conn.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conn.is_empty()
    }

    pub fn coords(&self, p: usize) -> [f64; 3] {
        let n = self.n;
        let h = self.h();
        [(p / (n * n)) as f64 * h, ((p / n) % n) as f64 * h, (p % n) as f64 * h]
    }

    /// The point `off` cells from p along `axis`, periodically.
    #[inline]
    pub fn shift(&self, p: usize, axis: usize, off: isize) -> usize {
        let n = self.n as isize;
        let mut c = [(p / (self.n * self.n)) as isize, ((p / self.n) % self.n) as isize, (p % self.n) as isize];
        c[axis] = (c[axis] + off).rem_euclid(n);
        ((c[0] * n + c[1]) * n + c[2]) as usize
    }

    /// Builds a field from closures of the position.
    pub fn from_fn(n: usize, l: f64, f: impl Fn([f64; 3]) -> ([Su2; 3], [Su2; 3])) -> TorusField {
        let mut t = TorusField::zeros(n, l);
        for p in 0..t.len() {
            let (c, h) = f(t.coords(p));
            t.conn[p] = c;
            t.higgs[p] = h;
        }
        t
    }

    /// Each of the 18 real components is a sum of `modes` Fourier modes with
    /// 0 < |k|∞ ≤ kmax and random phases, scaled so that every component is
    /// bounded by `amplitude`. No constant modes.
    pub fn random(n: usize, l: f64, amplitude: f64, kmax: i32, modes: usize, seed: u64) -> TorusField {
        let mut g = rng(seed);
        let kap = TAU / l;
        let mut terms = Vec::new();
        for comp in 0..18 {
            for _ in 0..modes {
                let k = loop {
                    let k: [i32; 3] = std::array::from_fn(|_| g.random_range(-kmax..=kmax));
                    if k != [0, 0, 0] {
                        break k;
                    }
                };
                let c = g.random_range(-1.0..1.0) * amplitude / modes as f64;
                terms.push((comp, k, g.random_range(0.0..TAU), c));
            }
        }
        TorusField::from_fn(n, l, |x| {
            let mut v = [0.0; 18];
            for (comp, k, ph, c) in &terms {
                v[*comp] += c * (kap * (k[0] as f64 * x[0] + k[1] as f64 * x[1] + k[2] as f64 * x[2]) + ph).cos();
            }
            let s = |o: usize| [Su2([v[o], v[o + 1], v[o + 2]]), Su2([v[o + 3], v[o + 4], v[o + 5]]), Su2([v[o + 6], v[o + 7], v[o + 8]])];
            (s(0), s(9))
        })
    }

    /// (A, 𝔞) = ε(v, −v)σ3 with v = (0, cos κx1, −sin κx1), κ = 2π/L. Since
    /// curl v = κv the flow is linear along it and decays like e^{−κt}.
    pub fn abelian(n: usize, l: f64, amplitude: f64) -> TorusField {
        let kap = TAU / l;
        TorusField::from_fn(n, l, |x| {
            let v = [0.0, (kap * x[0]).cos(), -(kap * x[0]).sin()];
            let e3 = Su2::basis(2);
            (v.map(|c| (amplitude * c) * e3), v.map(|c| (-amplitude * c) * e3))
        })
    }

    pub fn add_scaled(&self, s: f64, dir: &TorusField) -> TorusField {
        let zip = |a: &[[Su2; 3]], b: &[[Su2; 3]]| {
            a.iter().zip(b).map(|(x, y)| std::array::from_fn(|i| x[i] + s * y[i])).collect()
        };
        TorusField { n: self.n, l: self.l, conn: zip(&self.conn, &dir.conn), higgs: zip(&self.higgs, &dir.higgs) }
    }

    /// ∫⟨F, G⟩ by the rectangle rule (spectrally accurate for periodic data).
    pub fn inner(&self, o: &TorusField) -> f64 {
        let s: f64 = (0..self.len())
            .map(|p| (0..3).map(|i| self.conn[p][i].dot(&o.conn[p][i]) + self.higgs[p][i].dot(&o.higgs[p][i])).sum::<f64>())
            .sum();
        s * self.h().powi(3)
    }

    pub fn max_abs(&self) -> f64 {
        self.conn.iter().chain(&self.higgs).flatten().map(|v| v.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.conn.iter().chain(&self.higgs).flatten().all(|v| v.is_finite())
    }

    /// D_axis of component `c` of the given slot, fourth order.
    #[inline]
    fn d(&self, slot: &[[Su2; 3]], p: usize, axis: usize, c: usize) -> Su2 {
        let f = |o: isize| slot[self.shift(p, axis, o)][c];
        (1.0 / (12.0 * self.h())) * (8.0 * (f(1) - f(-1)) - (f(2) - f(-2)))
    }

    pub fn local(&self, p: usize) -> Local {
        let (a_conn, a_h) = (&self.conn[p], &self.higgs[p]);
        let mut da = [[Su2::ZERO; 3]; 3];
        let mut dh = [[Su2::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                da[i][j] = self.d(&self.conn, p, i, j);
                dh[i][j] = self.d(&self.higgs, p, i, j);
            }
        }
        let mut out = Local::default();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let e = EPS[k][i][j];
                    if e == 0.0 {
                        continue;
                    }
                    out.b[k] += e * (da[i][j] + 0.5 * a_conn[i].bracket(&a_conn[j]));
                    out.grad_conn[k] += e * (dh[i][j] + a_conn[i].bracket(&a_h[j]));
                    out.grad_higgs[k] -= (0.5 * e) * a_h[i].bracket(&a_h[j]);
                }
            }
            out.div += dh[k][k] + a_conn[k].bracket(&a_h[k]);
        }
        for k in 0..3 {
            out.grad_higgs[k] += out.b[k];
            out.cs_density += a_h[k].dot(&out.b[k]);
        }
        out.cs_density -= a_h[0].dot(&a_h[1].bracket(&a_h[2]));
        out
    }

    pub fn locals(&self) -> Vec<Local> {
        (0..self.len()).into_par_iter().map(|p| self.local(p)).collect()
    }
}

/// cs = ∫ Σ_k ⟨𝔞_k, B_k⟩ − ⟨𝔞_1, [𝔞_2, 𝔞_3]⟩.
/// The fourth-order central-difference symbol of ∂ at wavenumber κ:
/// (8 sin κh − sin 2κh)/(6h).
pub fn fd4_symbol(kappa: f64, h: f64) -> f64 {
    (8.0 * (kappa * h).sin() - (2.0 * kappa * h).sin()) / (6.0 * h)
}

pub fn cs_functional(f: &TorusField) -> f64 {
    f.locals().iter().map(|l| l.cs_density).sum::<f64>() * f.h().powi(3)
}

/// (*d_A𝔞, B_A − *(𝔞∧𝔞)) as a field.
pub fn gradient(f: &TorusField) -> TorusField {
    let locals = f.locals();
    TorusField {
        n: f.n,
        l: f.l,
        conn: locals.iter().map(|l| l.grad_conn).collect(),
        higgs: locals.iter().map(|l| l.grad_higgs).collect(),
    }
}

/// ∇f together with the monitors of f.
pub fn gradient_and_monitors(f: &TorusField) -> (TorusField, Monitors) {
    let locals = f.locals();
    let vol = f.h().powi(3);
    let mut m = Monitors::default();
    for (p, l) in locals.iter().enumerate() {
        m.cs += l.cs_density;
        m.grad_norm_sq += (0..3).map(|i| l.grad_conn[i].norm_sq() + l.grad_higgs[i].norm_sq()).sum::<f64>();
        m.constraint += l.div.norm_sq();
        for i in 0..3 {
            m.sup_a = m.sup_a.max(f.higgs[p][i].norm());
            m.sup_conn = m.sup_conn.max(f.conn[p][i].norm());
        }
    }
    m.cs *= vol;
    m.grad_norm_sq *= vol;
    m.constraint = (m.constraint * vol).sqrt();
    let g = TorusField {
        n: f.n,
        l: f.l,
        conn: locals.iter().map(|l| l.grad_conn).collect(),
        higgs: locals.iter().map(|l| l.grad_higgs).collect(),
    };
    (g, m)
}

#[derive(Clone, Debug, Serialize)]
pub struct GradientCheck {
    /// (s, relative error) per step size.
    pub errors: Vec<(f64, f64)>,
    /// log2 of successive error ratios for halved s.
    pub orders: Vec<f64>,
    pub directional: f64,
}

/// Central differences of s ↦ cs(F + s·dir) against ⟨∇f, dir⟩.
pub fn gradient_check(f: &TorusField, dir: &TorusField, s_list: &[f64]) -> GradientCheck {
    let exact = gradient(f).inner(dir);
    let errors: Vec<(f64, f64)> = s_list
        .iter()
        .map(|&s| {
            let fd = (cs_functional(&f.add_scaled(s, dir)) - cs_functional(&f.add_scaled(-s, dir))) / (2.0 * s);
            (s, (fd - exact).abs() / exact.abs())
        })
        .collect();
    let orders = errors.windows(2).map(|w| (w[0].1 / w[1].1).log2() / (w[0].0 / w[1].0).log2()).collect();
    GradientCheck { errors, orders, directional: exact }
}

/// Applies g = exp(ε φ(x) u) with |u| = 1: A ↦ g⁻¹Ag + g⁻¹dg, 𝔞 ↦ g⁻¹𝔞g.
/// φ is a sum of cosines (k, phase, amplitude) in units of 2π/L, so g⁻¹dg
/// = ε dφ u is exact. Conjugation by g⁻¹ is the rotation by 2εφ about u.
pub fn gauge_transform(f: &TorusField, u: Su2, phi: &[([i32; 3], f64, f64)], eps: f64) -> TorusField {
    let kap = TAU / f.l;
    let u = (1.0 / u.norm()) * u;
    let rot = |y: Su2, ang: f64| {
        let cross = Su2([u.0[1] * y.0[2] - u.0[2] * y.0[1], u.0[2] * y.0[0] - u.0[0] * y.0[2], u.0[0] * y.0[1] - u.0[1] * y.0[0]]);
        ang.cos() * y + ang.sin() * cross + ((1.0 - ang.cos()) * u.dot(&y)) * u
    };
    let mut out = f.clone();
    for p in 0..f.len() {
        let x = f.coords(p);
        let (mut val, mut grad) = (0.0, [0.0; 3]);
        for (k, ph, c) in phi {
            let arg = kap * (k[0] as f64 * x[0] + k[1] as f64 * x[1] + k[2] as f64 * x[2]) + ph;
            val += c * arg.cos();
            for i in 0..3 {
                grad[i] -= c * kap * k[i] as f64 * arg.sin();
            }
        }
        for i in 0..3 {
            out.conn[p][i] = rot(f.conn[p][i], 2.0 * eps * val) + (eps * grad[i]) * u;
            out.higgs[p][i] = rot(f.higgs[p][i], 2.0 * eps * val);
        }
    }
    out
}
