//! One-dimensional reductions on the hemisphere S⁺ = {x = 1, t > 0}, the
//! Hardy inequalities, and the radial ODE of the Ω-eigenmode decomposition.
//!
//! On S⁺ the coordinate Θ (with sinh Θ = t/|z|) and the longitude make the
//! round metric conformal to dΘ² + dφ² with factor sech²Θ. Θ → 0 is the
//! boundary circle t = 0 and Θ → ∞ is the pole z = 0. A longitude mode
//! e^{inφ} turns a Dirichlet energy into
//! ∫(f′² + n²f² + W f²) dΘ over the mass ∫ f² sech²Θ dΘ.

mod hardy;
mod radial;
mod tridiag;

pub use hardy::{
    gaussian_profile, hardy_suite, near_extremal_ratio, ratio_1d, ratio_half_space, HalfSpaceMember, HardyEntry,
    HardyFamily, HardyReport, Inequality, Member, Profile, Profile2,
};
pub use radial::{lambda_one_solutions, radial_admissible, radial_ode_solve, wronskian, Admissibility, RadialODEState};
pub use tridiag::Pencil;

use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Potentials of the reduced problems, with M = m + 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Potential {
    Zero,
    /// 2M² cosh²Θ / sinh²(MΘ).
    Case2 { m: u32 },
    /// M² (cosh²(MΘ) + cosh²Θ) / sinh²(MΘ).
    Case3 { m: u32 },
}

/// coshΘ / sinh(MΘ) without overflow.
fn cosh_over_sinh(th: f64, mm: f64) -> f64 {
    ((1.0 - mm) * th).exp() * (1.0 + (-2.0 * th).exp()) / (-(-2.0 * mm * th).exp_m1())
}

impl Potential {
    pub fn eval(&self, th: f64) -> f64 {
        match *self {
            Potential::Zero => 0.0,
            Potential::Case2 { m } => {
                let mm = (m + 1) as f64;
                2.0 * mm * mm * cosh_over_sinh(th, mm).powi(2)
            }
            Potential::Case3 { m } => {
                let mm = (m + 1) as f64;
                let coth = 1.0 / (mm * th).tanh();
                mm * mm * (coth * coth + cosh_over_sinh(th, mm).powi(2))
            }
        }
    }
}

/// Boundary condition at the truncation Θ_max.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PoleBc {
    /// Natural condition: no constraint on f, the regular choice at the pole.
    Natural,
    Dirichlet,
}

/// A Sturm–Liouville reduction on [Θ_min, Θ_max] with Dirichlet at Θ_min.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SLProblem {
    pub theta_min: f64,
    pub theta_max: f64,
    pub n_mesh: usize,
    pub angular_mode: u32,
    pub potential: Potential,
    pub pole_bc: PoleBc,
}

impl SLProblem {
    pub fn new(potential: Potential, angular_mode: u32) -> Self {
        SLProblem {
            theta_min: 1e-6,
            theta_max: 30.0,
            n_mesh: 4000,
            angular_mode,
            potential,
            pole_bc: PoleBc::Natural,
        }
    }

    /// Nodes clustered quadratically toward Θ_min.
    pub fn mesh(&self, n: usize) -> Vec<f64> {
        let span = self.theta_max - self.theta_min;
        (0..=n).map(|j| self.theta_min + span * (j as f64 / n as f64).powi(2)).collect()
    }

    /// Piecewise-linear elements with lumped mass and potential.
    pub fn pencil(&self, n: usize) -> Pencil {
        let th = self.mesh(n);
        let nn = (self.angular_mode as f64).powi(2);
        let last = match self.pole_bc {
            PoleBc::Natural => n,
            PoleBc::Dirichlet => n - 1,
        };
        let mut d = Vec::with_capacity(last);
        let mut e = Vec::with_capacity(last);
        let mut m = Vec::with_capacity(last);
        for j in 1..=last {
            let hl = th[j] - th[j - 1];
            let hr = if j < n { th[j + 1] - th[j] } else { 0.0 };
            let cell = 0.5 * (hl + hr);
            let stiff = 1.0 / hl + if hr > 0.0 { 1.0 / hr } else { 0.0 };
            d.push(stiff + (nn + self.potential.eval(th[j])) * cell);
            m.push(cell / th[j].cosh().powi(2));
            if j < last {
                e.push(-1.0 / hr);
            }
        }
        Pencil { d, e, m }
    }
}

/// Smallest Rayleigh quotient at two resolutions.
#[derive(Clone, Debug, Serialize)]
pub struct SLResult {
    pub mu: f64,
    pub mu_coarse: f64,
    pub n_mesh: usize,
}

/// The minimum of the Rayleigh quotient, from the mesh `n_mesh` and its
/// doubling; fails unless the two agree to three significant digits.
pub fn rayleigh_min(prob: &SLProblem) -> Result<SLResult> {
    let coarse = prob.pencil(prob.n_mesh).eigenvalue(0);
    let fine = prob.pencil(2 * prob.n_mesh).eigenvalue(0);
    if (fine - coarse).abs() > 5e-4 * fine.abs() {
        return Err(Error::NotConverged(format!("mu {coarse} -> {fine} under mesh doubling")));
    }
    Ok(SLResult { mu: fine, mu_coarse: coarse, n_mesh: 2 * prob.n_mesh })
}

/// The reduced cases whose λ-exclusion is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExclusionCase {
    /// The b3 / ct components; zero potential as a lower bound.
    B3Ct,
    Case2 { m: u32 },
    Case3 { m: u32 },
}

impl ExclusionCase {
    pub fn parse(name: &str, m: u32) -> Result<ExclusionCase> {
        match name {
            "b3ct" => Ok(ExclusionCase::B3Ct),
            "case2" | "case3" if m == 0 => Err(Error::InvalidArgument(format!("{name} needs m >= 1"))),
            "case2" => Ok(ExclusionCase::Case2 { m }),
            "case3" => Ok(ExclusionCase::Case3 { m }),
            _ => Err(Error::InvalidArgument(format!("unknown case '{name}'"))),
        }
    }

    pub fn potential(&self) -> Potential {
        match *self {
            ExclusionCase::B3Ct => Potential::Zero,
            ExclusionCase::Case2 { m } => Potential::Case2 { m },
            ExclusionCase::Case3 { m } => Potential::Case3 { m },
        }
    }

    pub fn name(&self) -> String {
        match self {
            ExclusionCase::B3Ct => "b3ct".into(),
            ExclusionCase::Case2 { m } => format!("case2(m={m})"),
            ExclusionCase::Case3 { m } => format!("case3(m={m})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExclusionReport {
    pub case: String,
    pub mu_min: f64,
    /// "lambda(lambda-1)" or "lambda(lambda+1)".
    pub form: String,
    /// The closed λ-interval on which the form is ≤ μ_min; such λ are excluded.
    pub excluded: (f64, f64),
    pub covers_zero_to_three_halves: bool,
    pub covers_one_half: bool,
}

/// μ_min for the case and the λ-interval it excludes.
pub fn exclusion_report(case: ExclusionCase) -> Result<ExclusionReport> {
    let mu = rayleigh_min(&SLProblem::new(case.potential(), 0))?.mu;
    let root = (1.0 + 4.0 * mu).sqrt();
    let (form, excluded) = match case {
        ExclusionCase::Case3 { .. } => ("lambda(lambda+1)", (-0.5 - 0.5 * root, -0.5 + 0.5 * root)),
        _ => ("lambda(lambda-1)", (0.5 - 0.5 * root, 0.5 + 0.5 * root)),
    };
    Ok(ExclusionReport {
        case: case.name(),
        mu_min: mu,
        form: form.into(),
        excluded,
        covers_zero_to_three_halves: excluded.0 <= 0.0 && excluded.1 >= 1.5,
        covers_one_half: excluded.0 <= 0.5 && excluded.1 >= 0.5,
    })
}

/// Lowest Dirichlet eigenpair of −(1/sinθ)(sinθ f′)′ on θ ∈ [0, π/2].
#[derive(Clone, Debug, Serialize)]
pub struct HemisphereEig {
    pub eigenvalue: f64,
    pub second: f64,
    pub theta: Vec<f64>,
    /// Normalized in L²(sinθ dθ), positive at the pole.
    pub eigenfunction: Vec<f64>,
    /// L²(sinθ dθ) distance to the normalized cosθ.
    pub distance_to_cos: f64,
}

/// Finite volumes on a uniform grid: nodes θ_j = jh with f(π/2) = 0,
/// flux weights sin(θ_{j±1/2}) and control-volume masses ∫ sinθ dθ.
pub fn hemisphere_eig0(n_mesh: usize) -> Result<HemisphereEig> {
    if n_mesh < 100 {
        return Err(Error::MeshTooCoarse { got: n_mesh, min: 100 });
    }
    let h = FRAC_PI_2 / n_mesh as f64;
    let th: Vec<f64> = (0..n_mesh).map(|j| j as f64 * h).collect();
    let mut p = Pencil { d: vec![0.0; n_mesh], e: vec![0.0; n_mesh - 1], m: vec![0.0; n_mesh] };
    for j in 0..n_mesh {
        let right = (th[j] + 0.5 * h).sin() / h;
        let left = if j > 0 { (th[j] - 0.5 * h).sin() / h } else { 0.0 };
        p.d[j] = left + right;
        if j + 1 < n_mesh {
            p.e[j] = -right;
        }
        let lo = (th[j] - 0.5 * h).max(0.0);
        p.m[j] = lo.cos() - (th[j] + 0.5 * h).cos();
    }
    let lam = p.eigenvalue(0);
    let second = p.eigenvalue(1);
    let f = p.eigenvector(lam)?;
    let cnorm = th.iter().zip(&p.m).map(|(t, m)| t.cos().powi(2) * m).sum::<f64>().sqrt();
    let dist = th
        .iter()
        .zip(&f)
        .zip(&p.m)
        .map(|((t, v), m)| (v - t.cos() / cnorm).powi(2) * m)
        .sum::<f64>()
        .sqrt();
    Ok(HemisphereEig { eigenvalue: lam, second, theta: th, eigenfunction: f, distance_to_cos: dist })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potentials_are_nested() {
        for th in [1e-3, 0.5, 2.0, 10.0] {
            let (a, b) = (Potential::Case2 { m: 2 }.eval(th), Potential::Case3 { m: 2 }.eval(th));
            assert!(0.0 <= a && a <= b);
        }
    }

    #[test]
    fn cosh_over_sinh_is_stable() {
        let direct = 2f64.cosh() / 6f64.sinh();
        assert!((cosh_over_sinh(2.0, 3.0) - direct).abs() < 1e-15);
        assert!(cosh_over_sinh(300.0, 5.0).is_finite());
    }
}
