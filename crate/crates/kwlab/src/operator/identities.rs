use super::{
    apply_d, apply_d_dagger, apply_l, clifford, jet, y_apply, Background, Depiction, Diff, FnSection, Pt, Section,
    Spinor8, B1, BT, C1, CT,
};
use crate::algebra::{bracket, LieElem, Su2};
use crate::clifford::{cluster, u_matrix, Endo24, Mat8};
use crate::error::Result;
use crate::util::EPS;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::TAU;

fn cplx(re: Su2, im: Su2) -> LieElem {
    re.to_lie() + im.to_lie().scale(C64::new(0.0, 1.0))
}

/// Compares the spatial part of 𝒟 with the complexified form
/// −(*d_𝔸η + d_𝔸*v, d_𝔸†η) where η = b + ic, v = ct + i·bt, 𝔸 = A + i𝔞 and
/// 𝔸* = A − i𝔞. The first slot is matched against q + ip, the second
/// against pt + i·qt. Returns the largest entry of the difference.
pub fn spatial_identification(bg: &Background, psi: &dyn Section, p: &Pt, d: &Diff) -> Result<f64> {
    let lhs = apply_l(bg, psi, p, d)?;
    let f = bg.fields(p)?;
    let v0 = psi.eval(p)?;
    let dpsi: Vec<Spinor8> = (1..4).map(|i| psi.partial(p, i, d)).collect::<Result<_>>()?;
    let eta = |s: &Spinor8, j: usize| cplx(s[B1 + j], s[C1 + j]);
    let vv = |s: &Spinor8| cplx(s[CT], s[BT]);
    let big_a = |i: usize| cplx(f.conn[i], f.higgs[i]);
    let big_a_star = |i: usize| cplx(f.conn[i], -f.higgs[i]);
    let mut err: f64 = 0.0;
    for k in 0..3 {
        let mut rhs = LieElem::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let e = EPS[k][i][j];
                if e != 0.0 {
                    rhs = rhs + (eta(&dpsi[i], j) + bracket(&big_a(i), &eta(&v0, j))).scale_re(e);
                }
            }
        }
        rhs = rhs + vv(&dpsi[k]) + bracket(&big_a_star(k), &vv(&v0));
        let got = cplx(lhs[C1 + k], lhs[B1 + k]);
        err = err.max((got + rhs).max_abs());
    }
    let mut div = LieElem::ZERO;
    for i in 0..3 {
        div = div + eta(&dpsi[i], i) + bracket(&big_a_star(i), &eta(&v0, i));
    }
    let got = cplx(lhs[BT], lhs[CT]);
    Ok(err.max((got - div).max_abs()))
}

/// Ξψ = 𝒟ψ − γ3∇3ψ.
pub fn xi_apply(bg: &Background, psi: &dyn Section, p: &Pt, d: &Diff) -> Result<Spinor8> {
    let j = jet(bg, psi, p, d)?;
    let full = super::from_jet(&j, Depiction::Clifford);
    Ok(full - j.nab[3].apply8(&clifford().gamma[2]))
}

fn apply_ut(u: &[[f64; 8]; 8], s: &Spinor8) -> Spinor8 {
    let mut out = Spinor8::ZERO;
    for r in 0..8 {
        for c in 0..8 {
            out[r] += u[c][r] * s[c];
        }
    }
    out
}

/// Ωξ = x·Ξ(Uᵀξ)(p) − x·∇ₓξ(p), with x∇ₓ = t∇t + z1∇1 + z2∇2.
pub fn omega_apply(bg: &Background, xi: &dyn Section, p: &Pt, d: &Diff) -> Result<Spinor8> {
    let c = clifford();
    let ut = FnSection(|q: &Pt| Ok(apply_ut(&u_matrix(c, q[0], q[1], q[2])?, &xi.eval(q)?)));
    let x = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let j = jet(bg, xi, p, d)?;
    let radial = p[0] * j.nab[0] + p[1] * j.nab[1] + p[2] * j.nab[2];
    Ok(x * xi_apply(bg, &ut, p, d)? - radial)
}

/// max |Ξ(ψ(·/λ))(λp) − λ⁻¹(Ξψ)(p)|, the step scaled along with the point.
pub fn xi_scale_defect(bg: &Background, psi: &dyn Section, p: &Pt, lambda: f64, d: &Diff) -> Result<f64> {
    let pulled = FnSection(|q: &Pt| psi.eval(&q.map(|v| v / lambda)));
    let lp = p.map(|v| v * lambda);
    let a = xi_apply(bg, &pulled, &lp, &d.scaled(lambda))?;
    let b = (1.0 / lambda) * xi_apply(bg, psi, p, d)?;
    Ok((a - b).max_abs())
}

/// max |𝒟(𝕐ψ) + 𝕐(𝒟†ψ)| at p.
pub fn y_intertwine(bg: &Background, psi: &dyn Section, p: &Pt, d: &Diff) -> Result<f64> {
    let ypsi = FnSection(|q: &Pt| Ok(y_apply(&psi.eval(q)?)));
    let a = apply_d(bg, &ypsi, p, Depiction::Clifford, d)?;
    let b = y_apply(&apply_d_dagger(bg, psi, p, d)?);
    Ok((a + b).max_abs())
}

/// Eigenvalues of the symbol of 𝔏 at one Fourier mode.
#[derive(Clone, Debug, Serialize)]
pub struct ModeSpectrum {
    pub k: [i32; 3],
    /// Distinct eigenvalues with multiplicities.
    pub eigen: Vec<(f64, usize)>,
}

/// For every k with |k|∞ ≤ k_max the Hermitian symbol i(γ·k) on ⊕₈ su(2);
/// computed as the imaginary parts of the spectrum of the real
/// antisymmetric γ·k ⊗ 1.
pub fn lattice_l_spectrum(k_max: i32) -> Vec<ModeSpectrum> {
    let c = clifford();
    let mut out = Vec::new();
    for k1 in -k_max..=k_max {
        for k2 in -k_max..=k_max {
            for k3 in -k_max..=k_max {
                let k = [k1, k2, k3];
                let mut m = Mat8::ZERO;
                for i in 0..3 {
                    m = m + Mat8::scaled_identity(k[i]) * c.gamma[i];
                }
                let spec = Endo24::lift(&m).antisymmetric_spectrum();
                out.push(ModeSpectrum { k, eigen: cluster(&spec, 1e-10) });
            }
        }
    }
    out
}

fn grid(n: usize) -> impl Iterator<Item = Pt> {
    let h = TAU / n as f64;
    (0..n.pow(4)).map(move |i| {
        let (a, b, c, d) = (i % n, (i / n) % n, (i / n / n) % n, i / n / n / n);
        [a as f64 * h, b as f64 * h, c as f64 * h, d as f64 * h]
    })
}

/// |∫⟨𝒟ψ, ξ⟩ − ∫⟨ψ, 𝒟†ξ⟩| / ∫|𝒟ψ||ξ| by the trapezoid rule on the periodic
/// box [0, 2π]⁴ with n points per side.
pub fn duality_defect(bg: &Background, psi: &dyn Section, xi: &dyn Section, n: usize, d: &Diff) -> Result<f64> {
    let (mut diff, mut scale) = (0.0, 0.0);
    for p in grid(n) {
        let dp = apply_d(bg, psi, &p, Depiction::Clifford, d)?;
        let x = xi.eval(&p)?;
        diff += dp.dot(&x) - psi.eval(&p)?.dot(&apply_d_dagger(bg, xi, &p, d)?);
        scale += dp.norm() * x.norm();
    }
    Ok(diff.abs() / scale)
}

/// |∫|𝒟ψ|² − ∫|∇tψ|² − ∫|𝔏ψ|²| / ∫|𝒟ψ|² on the periodic box, for a
/// background independent of t.
pub fn pythagoras_defect(bg: &Background, psi: &dyn Section, n: usize, d: &Diff) -> Result<f64> {
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for p in grid(n) {
        lhs += apply_d(bg, psi, &p, Depiction::Clifford, d)?.norm_sq();
        rhs += psi.partial(&p, 0, d)?.norm_sq() + apply_l(bg, psi, &p, d)?.norm_sq();
    }
    Ok((lhs - rhs).abs() / lhs)
}
