//! RK4 integration of the ascending flow with its monitors.

use super::{gradient_and_monitors, Monitors, TorusField};
use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::Value;
use std::collections::VecDeque;
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Zero,
    Random,
    Abelian,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InitSpec {
    pub kind: InitKind,
    pub amplitude: f64,
}

/// The flat JSON configuration of `flow run`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub dt: f64,
    pub steps: usize,
    pub seed: u64,
    pub init: InitSpec,
    /// Largest |k|∞ of the random initial modes.
    pub kmax_linear: i32,
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str) -> Option<&'a Value> {
    obj.get(name)
}

fn bad(field: &str, msg: &str) -> Error {
    Error::Config { field: field.into(), msg: msg.into() }
}

fn get_f64(obj: &serde_json::Map<String, Value>, name: &str, default: Option<f64>) -> Result<f64> {
    match field(obj, name) {
        None => default.ok_or_else(|| bad(name, "missing; expected a number")),
        Some(v) => v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| bad(name, "expected a finite number")),
    }
}

fn get_u64(obj: &serde_json::Map<String, Value>, name: &str, default: Option<u64>) -> Result<u64> {
    match field(obj, name) {
        None => default.ok_or_else(|| bad(name, "missing; expected a non-negative integer")),
        Some(v) => v.as_u64().ok_or_else(|| bad(name, "expected a non-negative integer")),
    }
}

impl FlowConfig {
    /// Parses and validates the JSON text, naming the offending field on error.
    pub fn from_json(text: &str) -> Result<FlowConfig> {
        let v: Value = serde_json::from_str(text).map_err(|e| bad("<root>", &format!("invalid JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| bad("<root>", "expected a JSON object"))?;
        const KNOWN: [&str; 7] = ["N", "L", "dt", "steps", "seed", "init", "kmax_linear"];
        if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(bad(k, "unknown field"));
        }
        let n = get_u64(obj, "N", None)? as usize;
        if n < 5 {
            return Err(bad("N", "expected an integer >= 5"));
        }
        let l = get_f64(obj, "L", Some(TAU))?;
        if l <= 0.0 {
            return Err(bad("L", "expected a positive number"));
        }
        let dt = get_f64(obj, "dt", None)?;
        if dt <= 0.0 {
            return Err(bad("dt", "expected a positive number"));
        }
        let steps = get_u64(obj, "steps", None)? as usize;
        let seed = get_u64(obj, "seed", Some(0))?;
        let kmax_linear = get_u64(obj, "kmax_linear", Some(2))? as i32;
        if kmax_linear < 1 {
            return Err(bad("kmax_linear", "expected an integer >= 1"));
        }
        let init = match field(obj, "init") {
            None => InitSpec { kind: InitKind::Zero, amplitude: 0.0 },
            Some(Value::Object(io)) => {
                let kind = match io.get("kind").and_then(Value::as_str) {
                    Some("zero") => InitKind::Zero,
                    Some("random") => InitKind::Random,
                    Some("abelian") => InitKind::Abelian,
                    _ => return Err(bad("init.kind", "expected one of zero|random|abelian")),
                };
                let amplitude = match io.get("amplitude") {
                    None => 0.0,
                    Some(a) => a.as_f64().filter(|x| x.is_finite()).ok_or_else(|| bad("init.amplitude", "expected a finite number"))?,
                };
                InitSpec { kind, amplitude }
            }
            Some(_) => return Err(bad("init", "expected an object {kind, amplitude}")),
        };
        Ok(FlowConfig { n, l, dt, steps, seed, init, kmax_linear })
    }

    pub fn initial_field(&self) -> TorusField {
        match self.init.kind {
            InitKind::Zero => TorusField::zeros(self.n, self.l),
            InitKind::Random => TorusField::random(self.n, self.l, self.init.amplitude, self.kmax_linear, 3, self.seed),
            InitKind::Abelian => TorusField::abelian(self.n, self.l, self.init.amplitude),
        }
    }

    pub fn params(&self) -> FlowParams {
        FlowParams { dt: self.dt, steps: self.steps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowParams {
    pub dt: f64,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FlowStatus {
    Completed,
    /// The field left the bounded region |A|, |𝔞| ≤ 1e3 or became non-finite.
    BlowUp { step: usize, time: f64 },
}

/// One row per accepted state; the energy columns are defined where the
/// five-point time stencil is available.
#[derive(Clone, Debug, Default, Serialize)]
pub struct FlowTrace {
    pub steps: Vec<usize>,
    pub times: Vec<f64>,
    pub cs: Vec<f64>,
    pub grad_norm_sq: Vec<f64>,
    /// |d cs/dt − ∫|∂t(A, 𝔞)|²| / ∫|∂t(A, 𝔞)|², both by fourth-order time differences.
    pub energy_identity_relerr: Vec<Option<f64>>,
    /// |∫|∂t(A, 𝔞)|² − ∫(|B − *(𝔞∧𝔞)|² + |d_A𝔞|²)| relative to the latter.
    pub two_forms_relerr: Vec<Option<f64>>,
    /// |‖d_A*𝔞‖(t) − ‖d_A*𝔞‖(0)|.
    pub constraint_drift: Vec<f64>,
    pub sup_a: Vec<f64>,
    pub initial_constraint: f64,
    /// Steps with cs(t + dt) < cs(t) − tol, tol = 1e-10·max(1, |cs|).
    pub monotonicity_violations: Vec<usize>,
    pub status: Option<FlowStatus>,
}

impl FlowTrace {
    pub fn monotone(&self) -> bool {
        self.monotonicity_violations.is_empty()
    }

    pub fn max_energy_relerr(&self) -> f64 {
        self.energy_identity_relerr.iter().flatten().fold(0.0, |m, v| m.max(*v))
    }

    pub fn max_two_forms_relerr(&self) -> f64 {
        self.two_forms_relerr.iter().flatten().fold(0.0, |m, v| m.max(*v))
    }

    pub fn completed(&self) -> bool {
        matches!(self.status, Some(FlowStatus::Completed))
    }

    fn push(&mut self, step: usize, time: f64, m: &Monitors) {
        self.steps.push(step);
        self.times.push(time);
        self.cs.push(m.cs);
        self.grad_norm_sq.push(m.grad_norm_sq);
        self.energy_identity_relerr.push(None);
        self.two_forms_relerr.push(None);
        self.constraint_drift.push((m.constraint - self.initial_constraint).abs());
        self.sup_a.push(m.sup_a);
    }
}

/// The stability bound 0.2·h of the fixed-step scheme.
pub fn cfl_bound(f: &TorusField) -> f64 {
    0.2 * f.h()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

const BLOW_UP: f64 = 1e3;

/// Integrates ∂t(A, 𝔞) = ∇f by classical RK4 with fixed dt.
pub fn run_flow(f0: &TorusField, params: &FlowParams) -> Result<FlowTrace> {
    let bound = cfl_bound(f0);
    if params.dt > bound {
        let suggested = (bound * 0.5 * 1e3).floor() / 1e3;
        return Err(Error::Cfl { dt: params.dt, bound, suggested: suggested.max(bound * 0.25) });
    }
    let dt = params.dt;
    let mut trace = FlowTrace::default();
    let mut state = f0.clone();
    let (mut k1, mut mon) = gradient_and_monitors(&state);
    trace.initial_constraint = mon.constraint;
    trace.push(0, 0.0, &mon);
    // The five most recent states with their velocities and monitors.
    let mut ring: VecDeque<(TorusField, Monitors)> = VecDeque::with_capacity(5);
    ring.push_back((state.clone(), mon));
    trace.status = Some(FlowStatus::Completed);
    for step in 1..=params.steps {
        let (k2, _) = gradient_and_monitors(&state.add_scaled(0.5 * dt, &k1));
        let (k3, _) = gradient_and_monitors(&state.add_scaled(0.5 * dt, &k2));
        let (k4, _) = gradient_and_monitors(&state.add_scaled(dt, &k3));
        let mut next = state.clone();
        for p in 0..next.len() {
            for i in 0..3 {
                next.conn[p][i] += (dt / 6.0) * (k1.conn[p][i] + 2.0 * k2.conn[p][i] + 2.0 * k3.conn[p][i] + k4.conn[p][i]);
                next.higgs[p][i] +=
                    (dt / 6.0) * (k1.higgs[p][i] + 2.0 * k2.higgs[p][i] + 2.0 * k3.higgs[p][i] + k4.higgs[p][i]);
            }
        }
        let time = step as f64 * dt;
        if !next.is_finite() || next.max_abs() > BLOW_UP {
            trace.status = Some(FlowStatus::BlowUp { step, time });
            break;
        }
        state = next;
        let prev_cs = mon.cs;
        (k1, mon) = gradient_and_monitors(&state);
        if mon.cs < prev_cs - 1e-10 * prev_cs.abs().max(1.0) {
            trace.monotonicity_violations.push(step);
        }
        trace.push(step, time, &mon);
        if ring.len() == 5 {
            ring.pop_front();
        }
        ring.push_back((state.clone(), mon));
        if ring.len() == 5 {
            let c = |i: usize| ring[i].1.cs;
            let dcs = (c(0) - 8.0 * c(1) + 8.0 * c(3) - c(4)) / (12.0 * dt);
            let w = [1.0, -8.0, 0.0, 8.0, -1.0];
            let mut vel = TorusField::zeros(state.n, state.l);
            for (wi, (f, _)) in w.iter().zip(ring.iter()) {
                if *wi != 0.0 {
                    vel = vel.add_scaled(wi / (12.0 * dt), f);
                }
            }
            let kinetic = vel.inner(&vel);
            let spatial = ring[2].1.grad_norm_sq;
            let row = trace.steps.len() - 3;
            trace.energy_identity_relerr[row] = Some(rel(dcs, kinetic));
            trace.two_forms_relerr[row] = Some(rel(kinetic, spatial));
        }
    }
    Ok(trace)
}
