//! Decay-rate fits of cs∞ − cs along a trace.

use crate::error::{Error, Result};
use crate::util::{linfit, r_squared};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    /// cs∞ − cs ≈ C e^{−rt}.
    Exponential,
    /// cs∞ − cs ≈ C t^{−p}.
    Power,
    /// cs is constant along the trace; no fit attempted.
    AlreadyConverged,
}

#[derive(Clone, Debug, Serialize)]
pub struct LojasiewiczFit {
    pub model: DecayModel,
    pub cs_inf: f64,
    pub rate: f64,
    pub power: f64,
    pub r2_exponential: f64,
    pub r2_power: f64,
    /// ½ for exponential decay, (1 − 1/p)/2 for power decay t^{−p}.
    pub mu_estimate: f64,
    pub points_used: usize,
}

/// Estimates cs∞ by Aitken extrapolation of three equally spaced tail
/// values, then fits log(cs∞ − cs) against t and against log t over the part
/// of the trace where the gap is resolved, keeping the better R².
pub fn lojasiewicz_fit(times: &[f64], cs: &[f64], grad_norm_sq: &[f64]) -> Result<LojasiewiczFit> {
    let n = cs.len();
    if n < 12 || times.len() != n || grad_norm_sq.len() != n {
        return Err(Error::NonConvergedTrace(format!("trace of length {n} too short")));
    }
    let spread = cs.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v)) - cs.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    if spread <= 1e-14 * cs[0].abs().max(1e-300) || spread == 0.0 {
        return Ok(LojasiewiczFit {
            model: DecayModel::AlreadyConverged,
            cs_inf: cs[n - 1],
            rate: 0.0,
            power: 0.0,
            r2_exponential: 1.0,
            r2_power: 1.0,
            mu_estimate: 0.5,
            points_used: 0,
        });
    }
    let tail = n / 4;
    if grad_norm_sq[n - 1] > grad_norm_sq[n - 1 - tail] {
        return Err(Error::NonConvergedTrace("gradient norm increases over the tail".into()));
    }
    let m = n / 10;
    let (c0, c1, c2) = (cs[n - 1 - 2 * m], cs[n - 1 - m], cs[n - 1]);
    let denom = c0 + c2 - 2.0 * c1;
    let cs_inf = if denom.abs() > 1e-300 { (c0 * c2 - c1 * c1) / denom } else { c2 };
    let cs_inf = cs_inf.max(c2);
    let gap0 = cs_inf - cs[0];
    let (mut t, mut lt, mut lg) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..n - n / 10 {
        let gap = cs_inf - cs[i];
        if gap > 1e-9 * gap0.abs() && times[i] > 0.0 {
            t.push(times[i]);
            lt.push(times[i].ln());
            lg.push(gap.ln());
        }
    }
    if t.len() < 5 {
        return Err(Error::NonConvergedTrace("too few resolved points after extrapolation".into()));
    }
    let (se, ie) = linfit(&t, &lg);
    let (sp, ip) = linfit(&lt, &lg);
    let r2e = r_squared(&t, &lg, se, ie);
    let r2p = r_squared(&lt, &lg, sp, ip);
    let (model, mu) = if r2e >= r2p { (DecayModel::Exponential, 0.5) } else { (DecayModel::Power, 0.5 * (1.0 + 1.0 / sp)) };
    Ok(LojasiewiczFit {
        model,
        cs_inf,
        rate: -se,
        power: -sp,
        r2_exponential: r2e,
        r2_power: r2p,
        mu_estimate: mu,
        points_used: t.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_exponential() {
        let t: Vec<f64> = (0..400).map(|i| 0.01 * i as f64).collect();
        let cs: Vec<f64> = t.iter().map(|t| 1.0 - (-3.0 * t).exp()).collect();
        let g: Vec<f64> = t.iter().map(|t| 3.0 * (-3.0 * t).exp()).collect();
        let fit = lojasiewicz_fit(&t, &cs, &g).unwrap();
        assert_eq!(fit.model, DecayModel::Exponential);
        assert!((fit.rate - 3.0).abs() < 0.03);
    }

    #[test]
    fn synthetic_power() {
        let t: Vec<f64> = (1..2000).map(|i| 0.05 * i as f64).collect();
        let cs: Vec<f64> = t.iter().map(|t| 2.0 - t.powi(-2)).collect();
        let g: Vec<f64> = t.iter().map(|t| 2.0 * t.powi(-3)).collect();
        let fit = lojasiewicz_fit(&t, &cs, &g).unwrap();
        assert_eq!(fit.model, DecayModel::Power);
        assert!((fit.power - 2.0).abs() < 0.2, "{fit:?}");
    }
}
