use super::{Pt, Spinor8};
use crate::error::Result;
use rand::Rng;

/// Centered finite differences of order 2 or 4 with step h.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diff {
    pub h: f64,
    pub order: u8,
}

impl Diff {
    pub fn new(h: f64, order: u8) -> Self {
        Diff { h, order }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Diff { h: self.h * lambda, order: self.order }
    }

    /// ∂_dir f at p.
    pub fn apply<F>(&self, f: F, p: &Pt, dir: usize) -> Result<Spinor8>
    where
        F: Fn(&Pt) -> Result<Spinor8>,
    {
        let at = |s: f64| {
            let mut q = *p;
            q[dir] += s * self.h;
            f(&q)
        };
        let h = self.h;
        Ok(match self.order {
            4 => (1.0 / (12.0 * h)) * (at(-2.0)? - at(2.0)? + 8.0 * (at(1.0)? - at(-1.0)?)),
            _ => (0.5 / h) * (at(1.0)? - at(-1.0)?),
        })
    }
}

/// A smooth section of ⊕₈ su(2) over an open set of (t, x1, x2, x3).
pub trait Section: Sync {
    fn eval(&self, p: &Pt) -> Result<Spinor8>;

    /// ∂_dir ψ at p; centered differences unless overridden with exact values.
    fn partial(&self, p: &Pt, dir: usize, d: &Diff) -> Result<Spinor8> {
        d.apply(|q| self.eval(q), p, dir)
    }
}

/// A section given by a closure.
pub struct FnSection<F>(pub F);

impl<F> Section for FnSection<F>
where
    F: Fn(&Pt) -> Result<Spinor8> + Sync,
{
    fn eval(&self, p: &Pt) -> Result<Spinor8> {
        (self.0)(p)
    }
}

/// Each real coordinate is Σ amp·cos(k·p + phase) with k ∈ ℤ⁴; partial
/// derivatives are exact.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSection {
    pub terms: Vec<(usize, [i32; 4], f64, f64)>,
}

impl TrigSection {
    /// `per_coord` random modes per real coordinate with |k_μ| ≤ kmax. Modes
    /// in the t direction are included only when `t_dependent` is set.
    pub fn random<R: Rng>(g: &mut R, per_coord: usize, kmax: i32, t_dependent: bool) -> TrigSection {
        let mut terms = Vec::new();
        for idx in 0..24 {
            for _ in 0..per_coord {
                let kt = if t_dependent { g.random_range(-kmax..=kmax) } else { 0 };
                let k = [kt, g.random_range(-kmax..=kmax), g.random_range(-kmax..=kmax), g.random_range(-kmax..=kmax)];
                terms.push((idx, k, g.random_range(0.0..std::f64::consts::TAU), g.random_range(-1.0..1.0)));
            }
        }
        TrigSection { terms }
    }

    fn arg(k: &[i32; 4], ph: f64, p: &Pt) -> f64 {
        (0..4).map(|m| k[m] as f64 * p[m]).sum::<f64>() + ph
    }
}

impl Section for TrigSection {
    fn eval(&self, p: &Pt) -> Result<Spinor8> {
        let mut v = [0.0; 24];
        for (idx, k, ph, a) in &self.terms {
            v[*idx] += a * Self::arg(k, *ph, p).cos();
        }
        Ok(Spinor8::from_vec(&v))
    }

    fn partial(&self, p: &Pt, dir: usize, _d: &Diff) -> Result<Spinor8> {
        let mut v = [0.0; 24];
        for (idx, k, ph, a) in &self.terms {
            v[*idx] -= a * k[dir] as f64 * Self::arg(k, *ph, p).sin();
        }
        Ok(Spinor8::from_vec(&v))
    }
}

/// A polynomial of degree ≤ 2 in each coordinate times a Gaussian centered at
/// `center` with width `width`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussPolySection {
    pub center: Pt,
    pub width: f64,
    /// Per real coordinate: constant, linear (4) and diagonal quadratic (4) coefficients.
    pub coef: Vec<[f64; 9]>,
}

impl GaussPolySection {
    pub fn random<R: Rng>(g: &mut R, center: Pt, width: f64) -> GaussPolySection {
        let coef = (0..24).map(|_| std::array::from_fn(|_| g.random_range(-1.0..1.0))).collect();
        GaussPolySection { center, width, coef }
    }
}

impl Section for GaussPolySection {
    fn eval(&self, p: &Pt) -> Result<Spinor8> {
        let y: [f64; 4] = std::array::from_fn(|m| p[m] - self.center[m]);
        let r2: f64 = y.iter().map(|v| v * v).sum();
        let g = (-r2 / (self.width * self.width)).exp();
        let v: Vec<f64> = self
            .coef
            .iter()
            .map(|c| g * (c[0] + (0..4).map(|m| c[1 + m] * y[m] + c[5 + m] * y[m] * y[m]).sum::<f64>()))
            .collect();
        Ok(Spinor8::from_vec(&v))
    }
}
