//! Witten's integer-m model solutions on (0,∞)×ℝ²×S¹.
//!
//! With M = m + 1, Θ = arcsinh(t/|z|) and x = (t² + |z|²)^{1/2}:
//!
//! - a3 = α σ3 with α = −(M/2t)·tanhΘ·coth(MΘ)
//! - φ = a1 − i a2 = −(1/2t)·M sinhΘ/sinh(MΘ)·(z/|z|)^m (σ1 − iσ2)
//! - A = (M/2)(1 − tanhΘ/tanh(MΘ)) σ3 (z1 dz2 − z2 dz1)/|z|²
//!
//! Coordinates are ordered (t, z1, z2, x3); spatial index 1 is z1, 2 is z2
//! and 3 is the circle. All fields are independent of x3.

use crate::algebra::{bracket, l_minus_basis, l_plus_basis, star, LieElem, Su2};
use crate::error::{Error, Result};
use crate::util::{linfit, rng};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// The solution with vanishing order m along the axis z = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSolution {
    pub m: u32,
    pub ell: f64,
}

/// A point (t, z1, z2, x3) with t > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldPoint {
    pub t: f64,
    pub z1: f64,
    pub z2: f64,
    pub x3: f64,
}

impl FieldPoint {
    pub fn new(t: f64, z1: f64, z2: f64) -> Self {
        FieldPoint { t, z1, z2, x3: 0.0 }
    }

    pub fn r(&self) -> f64 {
        self.z1.hypot(self.z2)
    }

    pub fn x(&self) -> f64 {
        self.t.hypot(self.r())
    }

    pub fn z(&self) -> C64 {
        C64::new(self.z1, self.z2)
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        FieldPoint { t: lambda * self.t, z1: lambda * self.z1, z2: lambda * self.z2, x3: self.x3 }
    }

    /// Shifted by `h` along coordinate `dir` (0 = t, 1 = z1, 2 = z2, 3 = x3).
    pub fn shifted(&self, dir: usize, h: f64) -> Self {
        let mut q = *self;
        match dir {
            0 => q.t += h,
            1 => q.z1 += h,
            2 => q.z2 += h,
            _ => q.x3 += h,
        }
        q
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.t, self.z1, self.z2]
    }
}

/// Θ = arcsinh(t/|z|) and x.
pub fn theta(z: C64, t: f64) -> Result<(f64, f64)> {
    if t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let r = z.norm();
    if r == 0.0 {
        return Err(Error::OnAxis);
    }
    Ok(((t / r).asinh(), t.hypot(r)))
}

/// sinh(Θ)/sinh(MΘ), stable for large MΘ.
fn sinh_ratio(th: f64, m: f64) -> f64 {
    (-(m - 1.0) * th).exp() * (-(-2.0 * th).exp_m1()) / (-(-2.0 * m * th).exp_m1())
}

/// All fields of the solution at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelEval {
    /// Higgs components a1, a2, a3.
    pub a: [Su2; 3],
    /// Connection components along dz1, dz2, dx3.
    pub conn: [Su2; 3],
    /// A = aphi·σ3·(z1 dz2 − z2 dz1)/|z|².
    pub aphi: f64,
    pub b3: Su2,
    pub e1: Su2,
    pub e2: Su2,
    pub alpha: f64,
    pub phi: LieElem,
}

impl ModelEval {
    pub fn curvature_norm(&self) -> f64 {
        (self.b3.norm_sq() + self.e1.norm_sq() + self.e2.norm_sq()).sqrt()
    }
}

fn s3(c: f64) -> Su2 {
    Su2([0.0, 0.0, c])
}

impl ModelSolution {
    pub fn new(m: u32) -> Self {
        ModelSolution { m, ell: 2.0 * PI }
    }

    /// The m = 0 member: A = 0, a_i = −σ_i/(2t).
    pub fn nahm() -> Self {
        Self::new(0)
    }

    fn big_m(&self) -> f64 {
        (self.m + 1) as f64
    }

    /// (z/|z|)^m, taken as 1 when m = 0.
    fn phase(&self, p: &FieldPoint) -> C64 {
        if self.m == 0 {
            return C64::new(1.0, 0.0);
        }
        (p.z() / p.r()).powu(self.m)
    }

    fn check(&self, p: &FieldPoint) -> Result<Option<(f64, f64)>> {
        if p.t <= 0.0 {
            return Err(Error::NonPositiveTime(p.t));
        }
        match theta(p.z(), p.t) {
            Ok(v) => Ok(Some(v)),
            Err(Error::OnAxis) if self.m == 0 => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// α; the σ3 coefficient of a3.
    pub fn alpha(&self, p: &FieldPoint) -> Result<f64> {
        let mm = self.big_m();
        Ok(match self.check(p)? {
            Some((th, _)) if self.m > 0 => -mm / (2.0 * p.t) * th.tanh() / (mm * th).tanh(),
            _ => -0.5 / p.t,
        })
    }

    /// (∂α/∂t, ∂α/∂z1, ∂α/∂z2) in closed form.
    pub fn alpha_grad(&self, p: &FieldPoint) -> Result<[f64; 3]> {
        let t = p.t;
        let Some((th, x)) = self.check(p)? else {
            return Ok([0.5 / (t * t), 0.0, 0.0]);
        };
        if self.m == 0 {
            return Ok([0.5 / (t * t), 0.0, 0.0]);
        }
        let mm = self.big_m();
        let r = p.r();
        let g = mm * th.tanh() / (mm * th).tanh();
        let sech2 = 1.0 / th.cosh().powi(2);
        let csch2_m = 1.0 / (mm * th).sinh().powi(2);
        let gp = mm * (sech2 / (mm * th).tanh() - mm * th.tanh() * csch2_m);
        let dt = g / (2.0 * t * t) - gp / (2.0 * t * x);
        let dr = gp / (2.0 * r * x);
        Ok([dt, dr * p.z1 / r, dr * p.z2 / r])
    }

    /// φ = a1 − i a2, valued in L⁺.
    pub fn phi(&self, p: &FieldPoint) -> Result<LieElem> {
        let mm = self.big_m();
        let amp = match self.check(p)? {
            Some((th, _)) => -0.5 / p.t * mm * sinh_ratio(th, mm),
            None => -0.5 / p.t,
        };
        Ok(l_plus_basis().scale(self.phase(p) * amp))
    }

    /// The angular coefficient (M/2)(1 − tanhΘ/tanh(MΘ)).
    pub fn aphi(&self, p: &FieldPoint) -> Result<f64> {
        let mm = self.big_m();
        Ok(match self.check(p)? {
            Some((th, _)) if self.m > 0 => 0.5 * mm * (1.0 - th.tanh() / (mm * th).tanh()),
            _ => 0.0,
        })
    }

    /// Connection components (A1, A2, A3) along (dz1, dz2, dx3).
    pub fn connection(&self, p: &FieldPoint) -> Result<[Su2; 3]> {
        let c = self.aphi(p)?;
        if c == 0.0 {
            return Ok([Su2::ZERO; 3]);
        }
        let r2 = p.r() * p.r();
        Ok([s3(-p.z2 * c / r2), s3(p.z1 * c / r2), Su2::ZERO])
    }

    /// Higgs components (a1, a2, a3).
    pub fn higgs(&self, p: &FieldPoint) -> Result<[Su2; 3]> {
        let phi = self.phi(p)?;
        let ps = star(&phi);
        let a1 = (phi + ps).scale_re(0.5).su2_part();
        let a2 = (ps - phi).scale(C64::new(0.0, -0.5)).su2_part();
        Ok([a1, a2, s3(self.alpha(p)?)])
    }

    /// B3, E1, E2 from their closed forms.
    pub fn curvature(&self, p: &FieldPoint) -> Result<(Su2, Su2, Su2)> {
        let Some((th, x)) = self.check(p)? else {
            return Ok((Su2::ZERO, Su2::ZERO, Su2::ZERO));
        };
        if self.m == 0 {
            return Ok((Su2::ZERO, Su2::ZERO, Su2::ZERO));
        }
        let mm = self.big_m();
        let coth = 1.0 / (mm * th).tanh();
        let br = 1.0 - mm * sinh_ratio(2.0 * th, mm);
        let b3 = mm / (2.0 * x * x) * th.tanh() * coth * br;
        let ec = -mm / (2.0 * x.powi(3)) * coth * br;
        Ok((s3(b3), s3(-ec * p.z2), s3(ec * p.z1)))
    }

    pub fn evaluate(&self, p: &FieldPoint) -> Result<ModelEval> {
        let (b3, e1, e2) = self.curvature(p)?;
        Ok(ModelEval {
            a: self.higgs(p)?,
            conn: self.connection(p)?,
            aphi: self.aphi(p)?,
            b3,
            e1,
            e2,
            alpha: self.alpha(p)?,
            phi: self.phi(p)?,
        })
    }

    /// Covariant derivative ∇_dir of a complex section by centered differences.
    /// dir 0 is t (no connection term), 1 and 2 are z1 and z2.
    pub fn covariant<F>(&self, f: F, p: &FieldPoint, dir: usize, h: f64) -> Result<LieElem>
    where
        F: Fn(&FieldPoint) -> Result<LieElem>,
    {
        let d = (f(&p.shifted(dir, h))? - f(&p.shifted(dir, -h))?).scale_re(0.5 / h);
        if dir == 0 || dir == 3 {
            return Ok(d);
        }
        let a = self.connection(p)?[dir - 1].to_lie();
        Ok(d + bracket(&a, &f(p)?))
    }

    fn guard(&self, p: &FieldPoint, h: f64) -> Result<()> {
        if p.t <= 0.0 {
            return Err(Error::NonPositiveTime(p.t));
        }
        let dist = p.r().min(p.t);
        if dist < 10.0 * h {
            return Err(Error::StepTooLarge { h, dist });
        }
        Ok(())
    }

    /// Residuals of ∇tφ = 2αφ, (∇1 + i∇2)φ = 0, E1 = ∂α/∂z2 σ3,
    /// E2 = −∂α/∂z1 σ3 and B3 = (∂α/∂t − |φ|²)σ3.
    pub fn verify_reduced_eqs(&self, p: &FieldPoint, h: f64) -> Result<ReducedResiduals> {
        self.guard(p, h)?;
        let phi = |q: &FieldPoint| self.phi(q);
        let alpha = |q: &FieldPoint| self.alpha(q);
        let d_alpha = |dir: usize| -> Result<f64> {
            Ok((alpha(&p.shifted(dir, h))? - alpha(&p.shifted(dir, -h))?) / (2.0 * h))
        };
        let ev = self.evaluate(p)?;
        let phi_t = (self.covariant(phi, p, 0, h)? - ev.phi.scale_re(2.0 * ev.alpha)).norm();
        let dbar = self.covariant(phi, p, 1, h)? + self.covariant(phi, p, 2, h)?.scale(C64::new(0.0, 1.0));
        let (at, a1, a2) = (d_alpha(0)?, d_alpha(1)?, d_alpha(2)?);
        Ok(ReducedResiduals {
            phi_t,
            phi_dbar: dbar.norm(),
            e1: (ev.e1 - s3(a2)).norm(),
            e2: (ev.e2 + s3(a1)).norm(),
            b3: (ev.b3 - s3(at - ev.phi.norm_sq())).norm(),
        })
    }

    /// The B3 residual with the |φ|² term removed; a negative control.
    pub fn b3_residual_without_phi_sq(&self, p: &FieldPoint, h: f64) -> Result<f64> {
        self.guard(p, h)?;
        let at = (self.alpha(&p.shifted(0, h))? - self.alpha(&p.shifted(0, -h))?) / (2.0 * h);
        Ok((self.curvature(p)?.0 - s3(at)).norm())
    }

    /// Checks the stated properties over `samples` seeded random points.
    pub fn verify_properties(&self, samples: usize, seed: u64) -> Result<PropertyReport> {
        let pts = sample_points(samples, seed);
        let mut rep = PropertyReport::default();
        let m = self.m as f64;
        for p in &pts {
            let ev = self.evaluate(p)?;
            let loc = p.coords();
            let s = 2.0 * p.t * ev.alpha;
            rep.record("alpha_range", (-(m + 1.0) - s).max(s + 1.0).max(0.0) - 1e-12, loc);
            let h = 1e-4 * p.t;
            let at = (self.alpha(&p.shifted(0, h))? - self.alpha(&p.shifted(0, -h))?) / (2.0 * h);
            rep.record("dalpha_dt_positive", -at, loc);
            let an = self.alpha_grad(p)?;
            rep.record("dalpha_dt_analytic", (an[0] - at).abs() / at.abs() - 1e-6, loc);
            let q = ev.phi.norm() * 2f64.sqrt() * p.t;
            if self.m == 0 {
                rep.record("phi_bound", (q - 1.0).abs() - 1e-10, loc);
            } else {
                rep.record("phi_bound", q - 1.0, loc);
                rep.record("phi_bound_strict", q - (1.0 - 1e-10), loc);
            }
            let fd = self.fd_curvature(p, 1e-5 * p.x())?;
            rep.record("b1_b2_e3_zero", fd.b1.norm().max(fd.b2.norm()).max(fd.e3.norm()) - 1e-12, loc);
            let printed = (fd.b3 - ev.b3).norm().max((fd.e1 - ev.e1).norm()).max((fd.e2 - ev.e2).norm());
            rep.record("curvature_closed_form", printed - 1e-7, loc);
            let c = ev.curvature_norm() * p.x().powi(3) / p.t;
            rep.record_value("curvature_decay_constant", c, loc);
            // σ3 is parallel: [A_i, σ3] = 0.
            let par = ev.conn.iter().map(|a| a.bracket(&Su2::basis(2)).norm()).fold(0.0, f64::max);
            rep.record("sigma3_parallel", par - 1e-15, loc);
            for lam in [2.0, 1.0 / 3.0] {
                let sc = self.evaluate(&p.scaled(lam))?;
                let mut worst: f64 = 0.0;
                for i in 0..3 {
                    worst = worst.max((lam * sc.a[i] - ev.a[i]).max_abs() / ev.a[i].max_abs().max(1e-300));
                    worst = worst.max((lam * sc.conn[i] - ev.conn[i]).max_abs() / ev.conn[i].max_abs().max(1.0));
                }
                worst = worst.max((lam * sc.alpha - ev.alpha).abs() / ev.alpha.abs());
                rep.record("scaling_equivariance", worst - 1e-12, loc);
            }
        }
        Ok(rep)
    }

    /// Curvature components of the connection by centered differences.
    pub fn fd_curvature(&self, p: &FieldPoint, h: f64) -> Result<FdCurvature> {
        let d = |dir: usize, comp: usize| -> Result<Su2> {
            let hi = self.connection(&p.shifted(dir, h))?[comp];
            let lo = self.connection(&p.shifted(dir, -h))?[comp];
            Ok((0.5 / h) * (hi - lo))
        };
        let conn = self.connection(p)?;
        // Spatial directions 1..3 ↔ FieldPoint directions 1, 2, 3 and components 0, 1, 2.
        let f = |i: usize, j: usize| -> Result<Su2> {
            Ok(d(i + 1, j)? - d(j + 1, i)? + conn[i].bracket(&conn[j]))
        };
        Ok(FdCurvature {
            b1: f(1, 2)?,
            b2: f(2, 0)?,
            b3: f(0, 1)?,
            e1: d(0, 0)?,
            e2: d(0, 1)?,
            e3: d(0, 2)?,
        })
    }

    /// σ₋ = z^p φ*/|φ|², valued in L⁻ with ⟨φ, σ₋⟩ = z^p.
    pub fn sigma_minus(&self, p_degree: u32, p: &FieldPoint) -> Result<LieElem> {
        if self.m == 0 {
            return Err(Error::InvalidArgument("sigma_minus needs m >= 1".into()));
        }
        if p_degree < self.m {
            return Err(Error::Pole { p: p_degree, m: self.m });
        }
        let phi = self.phi(p)?;
        Ok(star(&phi).scale(p.z().powu(p_degree) / phi.norm_sq()))
    }

    /// Residuals of ∇tσ₋ + 2ασ₋ = 0 and (∇1 + i∇2)σ₋ = 0, plus the fitted
    /// homogeneity exponent of |σ₋| along the ray through `p`.
    pub fn case4_solution(&self, p_degree: u32, p: &FieldPoint, h: f64) -> Result<Case4Result> {
        self.guard(p, h)?;
        let f = |q: &FieldPoint| self.sigma_minus(p_degree, q);
        let s = f(p)?;
        let resid_t = (self.covariant(f, p, 0, h)? + s.scale_re(2.0 * self.alpha(p)?)).norm();
        let resid_dbar =
            (self.covariant(f, p, 1, h)? + self.covariant(f, p, 2, h)?.scale(C64::new(0.0, 1.0))).norm();
        let (mut lx, mut ly) = (Vec::new(), Vec::new());
        for k in 0..8 {
            let lam = 2f64.powf(k as f64 * 0.5);
            let q = p.scaled(lam);
            lx.push(q.x().ln());
            ly.push(f(&q)?.norm().ln());
        }
        let (exponent, _) = linfit(&lx, &ly);
        let in_lminus = (s - l_minus_basis().scale(s.coords()[0])).max_abs();
        Ok(Case4Result { resid_t, resid_dbar, exponent, lminus_defect: in_lminus })
    }
}

/// Residual norms of the reduced equations at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ReducedResiduals {
    pub phi_t: f64,
    pub phi_dbar: f64,
    pub e1: f64,
    pub e2: f64,
    pub b3: f64,
}

impl ReducedResiduals {
    pub fn as_array(&self) -> [f64; 5] {
        [self.phi_t, self.phi_dbar, self.e1, self.e2, self.b3]
    }

    pub const NAMES: [&'static str; 5] = ["phi_t", "phi_dbar", "e1", "e2", "b3"];

    pub fn max(&self) -> f64 {
        self.as_array().into_iter().fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdCurvature {
    pub b1: Su2,
    pub b2: Su2,
    pub b3: Su2,
    pub e1: Su2,
    pub e2: Su2,
    pub e3: Su2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Case4Result {
    pub resid_t: f64,
    pub resid_dbar: f64,
    pub exponent: f64,
    pub lminus_defect: f64,
}

/// Aggregate residuals at step h and h/2 over a point set.
#[derive(Clone, Debug, Serialize)]
pub struct RichardsonReport {
    pub m: u32,
    pub h: f64,
    pub max_residual: f64,
    pub worst_location: [f64; 3],
    /// Per residual: L2 aggregate at h, at h/2, and their ratio. Residuals
    /// that vanish identically (below 1e-14 at both steps) get ratio None.
    pub per_residual: BTreeMap<String, (f64, f64, Option<f64>)>,
}

impl RichardsonReport {
    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_residual.values().filter_map(|v| v.2)
    }
}

pub fn richardson_sweep(ms: &ModelSolution, pts: &[FieldPoint], h: f64) -> Result<RichardsonReport> {
    let mut agg = [[0.0f64; 5]; 2];
    let mut max_residual = 0.0;
    let mut worst_location = [0.0; 3];
    for p in pts {
        for (k, hh) in [h, 0.5 * h].into_iter().enumerate() {
            let r = ms.verify_reduced_eqs(p, hh)?.as_array();
            for i in 0..5 {
                agg[k][i] += r[i] * r[i];
            }
            if k == 0 {
                let mx = r.into_iter().fold(0.0, f64::max);
                if mx > max_residual {
                    max_residual = mx;
                    worst_location = p.coords();
                }
            }
        }
    }
    let mut per_residual = BTreeMap::new();
    for i in 0..5 {
        let (a, b) = (agg[0][i].sqrt(), agg[1][i].sqrt());
        let ratio = if a < 1e-14 && b < 1e-14 { None } else { Some(a / b) };
        per_residual.insert(ReducedResiduals::NAMES[i].to_string(), (a, b, ratio));
    }
    Ok(RichardsonReport { m: ms.m, h, max_residual, worst_location, per_residual })
}

/// Seeded points with t ∈ [0.5, 2], |z| ∈ [0.3, 2] and uniform angle.
pub fn sample_points(n: usize, seed: u64) -> Vec<FieldPoint> {
    let mut g = rng(seed);
    (0..n)
        .map(|_| {
            let t = g.random_range(0.5..2.0);
            let r = g.random_range(0.3..2.0);
            let ang = g.random_range(0.0..2.0 * PI);
            FieldPoint::new(t, r * ang.cos(), r * ang.sin())
        })
        .collect()
}

/// Outcome of one property over a sample set.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PropertyResult {
    pub pass: bool,
    pub worst_violation: f64,
    pub location: Option<[f64; 3]>,
}

/// Properties keyed by name. A property passes when every recorded margin is
/// ≤ 0; the worst margin and its location are kept. Informational values
/// (no pass criterion beyond finiteness) record the maximum observed value.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyReport(pub BTreeMap<String, PropertyResult>);

impl PropertyReport {
    pub fn record(&mut self, name: &str, margin: f64, loc: [f64; 3]) {
        let e = self.0.entry(name.to_string()).or_insert(PropertyResult {
            pass: true,
            worst_violation: f64::NEG_INFINITY,
            location: None,
        });
        if margin > e.worst_violation || margin.is_nan() {
            e.worst_violation = margin;
            e.location = Some(loc);
        }
        if !(margin <= 0.0) {
            e.pass = false;
        }
    }

    pub fn record_value(&mut self, name: &str, value: f64, loc: [f64; 3]) {
        let e = self.0.entry(name.to_string()).or_insert(PropertyResult {
            pass: true,
            worst_violation: f64::NEG_INFINITY,
            location: None,
        });
        if value > e.worst_violation {
            e.worst_violation = value;
            e.location = Some(loc);
        }
        if !value.is_finite() {
            e.pass = false;
        }
    }

    pub fn all_pass(&self) -> bool {
        self.0.values().all(|r| r.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nahm_values_on_axis() {
        let ms = ModelSolution::nahm();
        let ev = ms.evaluate(&FieldPoint::new(2.0, 0.0, 0.0)).unwrap();
        assert_eq!(ev.alpha, -0.25);
        assert!((ev.a[0] - Su2([-0.25, 0.0, 0.0])).max_abs() < 1e-15);
        assert!((ev.a[1] - Su2([0.0, -0.25, 0.0])).max_abs() < 1e-15);
    }

    #[test]
    fn axis_rejected_for_positive_m() {
        let ms = ModelSolution::new(1);
        assert_eq!(ms.evaluate(&FieldPoint::new(1.0, 0.0, 0.0)), Err(Error::OnAxis));
    }

    #[test]
    fn sinh_ratio_matches_direct() {
        for th in [1e-6f64, 0.1, 1.0, 5.0] {
            let d = th.sinh() / (3.0 * th).sinh();
            assert!((sinh_ratio(th, 3.0) - d).abs() < 1e-12 * d.max(1e-300) + 1e-16);
        }
    }
}
