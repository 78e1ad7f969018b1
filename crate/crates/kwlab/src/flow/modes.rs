//! Fourier-mode calculus at the trivial background on the side-2π torus:
//! 𝔏 = γ^i∂_i has symbol L(k) = i γ·k with L(k)² = |k|², so Π± = (1 ± L/|k|)/2
//! and 𝔏⁻¹ = L/|k|² on the complement of the constant modes.

use crate::error::{Error, Result};
use crate::operator::clifford;
use crate::util::{rng, EPS};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;
use std::f64::consts::TAU;

/// Coefficients of one mode: eight slots (b1, b2, b3, bt, c1, c2, c3, ct),
/// each a complexified su(2) element in coordinates.
pub type Coef = [[C64; 3]; 8];

const ZERO: Coef = [[C64::new(0.0, 0.0); 3]; 8];
const BT: usize = 3;
const CT: usize = 7;

/// ψ(x) = Σ_k ψ̂(k) e^{ik·x} over |k|∞ ≤ kmax, with ψ̂(−k) = conj ψ̂(k).
#[derive(Clone, Debug, PartialEq)]
pub struct ModeVector {
    pub kmax: i32,
    pub coefs: Vec<Coef>,
}

fn add(a: &Coef, b: &Coef, s: f64) -> Coef {
    std::array::from_fn(|r| std::array::from_fn(|c| a[r][c] + b[r][c] * s))
}

fn norm_sq(a: &Coef) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum()
}

fn cbracket(x: &[C64; 3], y: &[C64; 3]) -> [C64; 3] {
    [
        (x[1] * y[2] - x[2] * y[1]) * -2.0,
        (x[2] * y[0] - x[0] * y[2]) * -2.0,
        (x[0] * y[1] - x[1] * y[0]) * -2.0,
    ]
}

/// L(k)v = i Σ_j k_j γ_j v.
pub fn l_symbol(k: [i32; 3], v: &Coef) -> Coef {
    let c = clifford();
    let mut out = ZERO;
    for j in 0..3 {
        if k[j] == 0 {
            continue;
        }
        let g = &c.gamma[j].0;
        for r in 0..8 {
            for s in 0..8 {
                if g[r][s] != 0 {
                    let f = C64::new(0.0, (k[j] * g[r][s]) as f64);
                    for a in 0..3 {
                        out[r][a] += f * v[s][a];
                    }
                }
            }
        }
    }
    out
}

/// The pointwise quadratic form of the map 𝔉 at 𝔞 = 0, with the first
/// factor of each bracket taken from x and the second from y:
/// p = −[b, bt] − *(b∧c + c∧b) + [c, ct],
/// q = −[b, ct] − *(b∧b − c∧c) − [c, bt],
/// qt = [bt, ct] + [b_i, c_i], pt = 0.
pub fn sharp(x: &Coef, y: &Coef) -> Coef {
    let mut out = ZERO;
    let acc = |o: &mut [C64; 3], v: [C64; 3], s: f64| {
        for a in 0..3 {
            o[a] += v[a] * s;
        }
    };
    for k in 0..3 {
        let (bk, ck) = (k, 4 + k);
        acc(&mut out[bk], cbracket(&x[bk], &y[BT]), -1.0);
        acc(&mut out[bk], cbracket(&x[ck], &y[CT]), 1.0);
        acc(&mut out[ck], cbracket(&x[bk], &y[CT]), -1.0);
        acc(&mut out[ck], cbracket(&x[ck], &y[BT]), -1.0);
        for i in 0..3 {
            for j in 0..3 {
                let e = EPS[k][i][j];
                if e == 0.0 {
                    continue;
                }
                // *(b∧c + c∧b)_k = ε_kij [b_i, c_j] after symmetrizing.
                acc(&mut out[bk], cbracket(&x[i], &y[4 + j]), -0.5 * e);
                acc(&mut out[bk], cbracket(&x[4 + i], &y[j]), -0.5 * e);
                acc(&mut out[ck], cbracket(&x[i], &y[j]), -0.5 * e);
                acc(&mut out[ck], cbracket(&x[4 + i], &y[4 + j]), 0.5 * e);
            }
        }
        acc(&mut out[CT], cbracket(&x[k], &y[4 + k]), 1.0);
    }
    acc(&mut out[CT], cbracket(&x[BT], &y[CT]), 1.0);
    out
}

impl ModeVector {
    pub fn zeros(kmax: i32) -> ModeVector {
        let w = (2 * kmax + 1) as usize;
        ModeVector { kmax, coefs: vec![ZERO; w * w * w] }
    }

    fn width(&self) -> i32 {
        2 * self.kmax + 1
    }

    pub fn contains(&self, k: [i32; 3]) -> bool {
        k.iter().all(|c| c.abs() <= self.kmax)
    }

    pub fn index(&self, k: [i32; 3]) -> usize {
        let (w, m) = (self.width(), self.kmax);
        (((k[0] + m) * w + (k[1] + m)) * w + (k[2] + m)) as usize
    }

    pub fn modes(&self) -> impl Iterator<Item = [i32; 3]> {
        let m = self.kmax;
        (-m..=m).flat_map(move |a| (-m..=m).flat_map(move |b| (-m..=m).map(move |c| [a, b, c])))
    }

    pub fn get(&self, k: [i32; 3]) -> &Coef {
        &self.coefs[self.index(k)]
    }

    /// Sets ψ̂(k) = v and ψ̂(−k) = conj v.
    pub fn set(&mut self, k: [i32; 3], v: Coef) {
        let i = self.index(k);
        self.coefs[i] = v;
        let j = self.index(k.map(|c| -c));
        self.coefs[j] = v.map(|r| r.map(|z| z.conj()));
        if i == j {
            self.coefs[i] = v.map(|r| r.map(|z| C64::new(z.re, 0.0)));
        }
    }

    pub fn reality_defect(&self) -> f64 {
        self.modes()
            .map(|k| {
                let (a, b) = (self.get(k), self.get(k.map(|c| -c)));
                a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y.conj()).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn([i32; 3], &Coef) -> Coef) -> ModeVector {
        let coefs = self.modes().map(|k| f(k, self.get(k))).collect();
        ModeVector { kmax: self.kmax, coefs }
    }

    pub fn axpy(&self, s: f64, o: &ModeVector) -> ModeVector {
        let coefs = self.coefs.iter().zip(&o.coefs).map(|(a, b)| add(a, b, s)).collect();
        ModeVector { kmax: self.kmax, coefs }
    }

    /// ∫|ψ|² over the side-2π torus.
    pub fn l2_norm(&self) -> f64 {
        (TAU.powi(3) * self.coefs.iter().map(norm_sq).sum::<f64>()).sqrt()
    }

    /// (∫|∇ψ|² + |ψ|²)^{1/2}.
    pub fn h_norm(&self) -> f64 {
        let s: f64 = self.modes().map(|k| (1.0 + k2(k)) * norm_sq(self.get(k))).sum();
        (TAU.powi(3) * s).sqrt()
    }

    pub fn apply_l(&self) -> ModeVector {
        self.map(|k, v| l_symbol(k, v))
    }

    /// Π⁰: the constant mode.
    pub fn proj_zero(&self) -> ModeVector {
        self.map(|k, v| if k == [0, 0, 0] { *v } else { ZERO })
    }

    pub fn proj_plus(&self) -> ModeVector {
        self.map(|k, v| proj(k, v, 1.0))
    }

    pub fn proj_minus(&self) -> ModeVector {
        self.map(|k, v| proj(k, v, -1.0))
    }

    /// 𝔏⁻¹(1 − Π⁰).
    pub fn l_inverse(&self) -> ModeVector {
        self.map(|k, v| {
            let kk = k2(k);
            if kk == 0.0 {
                ZERO
            } else {
                l_symbol(k, v).map(|r| r.map(|z| z / kk))
            }
        })
    }

    /// Fourier coefficients of the pointwise ψ#ψ, truncated to the box.
    pub fn sharp_square(&self) -> ModeVector {
        let mut out = ModeVector::zeros(self.kmax);
        let ks: Vec<[i32; 3]> = self.modes().filter(|k| norm_sq(self.get(*k)) > 0.0).collect();
        for k1 in &ks {
            for k2 in &ks {
                let k = [k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]];
                if out.contains(k) {
                    let s = sharp(self.get(*k1), self.get(*k2));
                    let i = out.index(k);
                    out.coefs[i] = add(&out.coefs[i], &s, 1.0);
                }
            }
        }
        out
    }

    /// Random real data on 0 < |k|∞ ≤ kmax, coefficient sizes ∝ 1/(1 + |k|²).
    pub fn random(kmax: i32, seed: u64) -> ModeVector {
        let mut g = rng(seed);
        let mut out = ModeVector::zeros(kmax);
        let ks: Vec<[i32; 3]> = out.modes().collect();
        for k in ks {
            if k <= k.map(|c| -c) {
                continue;
            }
            let s = 1.0 / (1.0 + k2(k));
            let v: Coef = std::array::from_fn(|_| {
                std::array::from_fn(|_| C64::new(g.random_range(-s..s), g.random_range(-s..s)))
            });
            out.set(k, v);
        }
        out
    }

    /// A single real mode at ±k lying in the ±1·|k| eigenspace of 𝔏.
    pub fn eigen_mode(kmax: i32, k: [i32; 3], sign: f64, seed: u64) -> ModeVector {
        let mut g = rng(seed);
        let v: Coef = std::array::from_fn(|_| std::array::from_fn(|_| C64::new(g.random_range(-1.0..1.0), g.random_range(-1.0..1.0))));
        let mut out = ModeVector::zeros(kmax);
        out.set(k, proj(k, &v, sign));
        out
    }

    /// Constant (b, c) with bt = ct = 0, an element of H¹ at the trivial
    /// background.
    pub fn h1(kmax: i32, b: [[f64; 3]; 3], c: [[f64; 3]; 3]) -> ModeVector {
        let mut v = ZERO;
        for i in 0..3 {
            v[i] = b[i].map(|x| C64::new(x, 0.0));
            v[4 + i] = c[i].map(|x| C64::new(x, 0.0));
        }
        let mut out = ModeVector::zeros(kmax);
        out.set([0, 0, 0], v);
        out
    }

    pub fn scaled(&self, s: f64) -> ModeVector {
        ModeVector::zeros(self.kmax).axpy(s, self)
    }
}

fn k2(k: [i32; 3]) -> f64 {
    k.iter().map(|c| (c * c) as f64).sum()
}

fn proj(k: [i32; 3], v: &Coef, sign: f64) -> Coef {
    let kk = k2(k);
    if kk == 0.0 {
        return ZERO;
    }
    add(v, &l_symbol(k, v), sign / kk.sqrt()).map(|r| r.map(|z| z * 0.5))
}

/// Norms of Π±ψ(t) along ∂tψ = −𝔏ψ.
#[derive(Clone, Debug, Serialize)]
pub struct DecayTrace {
    pub times: Vec<f64>,
    pub f_plus: Vec<f64>,
    pub f_minus: Vec<f64>,
}

impl DecayTrace {
    /// min over t > 0 of −ln(f₊(t)/f₊(0))/t.
    pub fn min_plus_rate(&self) -> f64 {
        self.times
            .iter()
            .zip(&self.f_plus)
            .skip(1)
            .map(|(t, f)| -(f / self.f_plus[0]).ln() / t)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Exact evolution in mode space: ψ̂(k, t) = e^{−|k|t}Π₊ψ̂ + e^{|k|t}Π₋ψ̂.
pub fn linearized_decay(kmax: i32, psi0: &ModeVector, t_end: f64, dt: f64) -> Result<DecayTrace> {
    if psi0.kmax != kmax {
        return Err(Error::InvalidArgument(format!("mode vector has kmax {} not {kmax}", psi0.kmax)));
    }
    let z = psi0.proj_zero().l2_norm();
    if z > 1e-12 {
        return Err(Error::ZeroModeContamination(z));
    }
    let (pp, pm) = (psi0.proj_plus(), psi0.proj_minus());
    let w: Vec<(f64, f64, f64)> =
        psi0.modes().map(|k| (k2(k).sqrt(), norm_sq(pp.get(k)), norm_sq(pm.get(k)))).collect();
    let steps = (t_end / dt).round() as usize;
    let mut tr = DecayTrace { times: Vec::new(), f_plus: Vec::new(), f_minus: Vec::new() };
    for s in 0..=steps {
        let t = s as f64 * dt;
        let fp: f64 = w.iter().map(|(k, p, _)| (-2.0 * k * t).exp() * p).sum();
        let fm: f64 = w.iter().map(|(k, _, m)| (2.0 * k * t).exp() * m).sum();
        tr.times.push(t);
        tr.f_plus.push((TAU.powi(3) * fp).sqrt());
        tr.f_minus.push((TAU.powi(3) * fm).sqrt());
    }
    Ok(tr)
}

#[derive(Clone, Debug, Serialize)]
pub struct KuranishiResult {
    #[serde(skip)]
    pub w: Option<ModeVector>,
    pub phi_norm: f64,
    pub w_norm: f64,
    pub iterations: usize,
    /// Largest ratio ‖w_{n+1} − w_n‖ / ‖w_n − w_{n−1}‖ observed.
    pub contraction_ratio: f64,
    /// ‖𝔏w + (1 − Π⁰)((φ + w)#(φ + w))‖ in L².
    pub residual: f64,
    /// ‖w‖ / ‖φ‖², ℍ norms.
    pub kappa: f64,
}

/// Iterates w ↦ −𝔏⁻¹(1 − Π⁰)((φ + w)#(φ + w)) from w = 0 until successive
/// iterates differ by less than `tol` in ℍ.
pub fn kuranishi_fixed_point(phi: &ModeVector, tol: f64) -> Result<KuranishiResult> {
    let g = |w: &ModeVector| phi.axpy(1.0, w).sharp_square().l_inverse().scaled(-1.0);
    let mut w = ModeVector::zeros(phi.kmax);
    let (mut prev_diff, mut ratio) = (f64::NAN, 0.0f64);
    let mut iterations = 0;
    loop {
        let next = g(&w);
        let diff = next.axpy(-1.0, &w).h_norm();
        iterations += 1;
        if prev_diff > 0.0 {
            ratio = ratio.max(diff / prev_diff);
        }
        w = next;
        if diff <= tol {
            break;
        }
        if (prev_diff > 0.0 && diff >= prev_diff) || iterations >= 500 || !diff.is_finite() {
            return Err(Error::ContractionFailure(diff / prev_diff));
        }
        prev_diff = diff;
    }
    let s = phi.axpy(1.0, &w);
    let sq = s.sharp_square();
    let residual = w.apply_l().axpy(1.0, &sq.axpy(-1.0, &sq.proj_zero())).l2_norm();
    let (pn, wn) = (phi.h_norm(), w.h_norm());
    Ok(KuranishiResult {
        w: Some(w),
        phi_norm: pn,
        w_norm: wn,
        iterations,
        contraction_ratio: ratio,
        residual,
        kappa: if pn > 0.0 { wn / (pn * pn) } else { 0.0 },
    })
}

/// The Kuranishi map on H¹: φ must be a constant (b, c) with bt = ct = 0.
pub fn kuranishi_w(phi: &ModeVector, tol: f64) -> Result<KuranishiResult> {
    for k in phi.modes() {
        let v = phi.get(k);
        let slot = |x: &[C64; 3]| x.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let off = if k == [0, 0, 0] { slot(&v[BT]) + slot(&v[CT]) } else { norm_sq(v) };
        if off > 1e-28 {
            return Err(Error::InvalidArgument(format!("phi is not in H1: mode {k:?} carries {:.3e}", off.sqrt())));
        }
    }
    kuranishi_fixed_point(phi, tol)
}
