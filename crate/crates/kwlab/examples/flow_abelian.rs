//! Abelian flow on the torus against its closed-form decay, and the blow-up
//! of generic small data.

use kwlab::flow::{fd4_symbol, run_flow, FlowParams, TorusField};
use std::f64::consts::TAU;

fn main() {
    let f = TorusField::abelian(16, TAU, 0.1);
    let tr = run_flow(&f, &FlowParams { dt: 0.02, steps: 200 }).unwrap();
    let t = *tr.times.last().unwrap();
    let rate = (tr.cs[0] / tr.cs.last().unwrap()).ln() / t;
    println!("abelian: fitted rate {rate:.5}, expected {:.5}, energy relerr {:.1e}", 2.0 * fd4_symbol(1.0, f.h()), tr.max_energy_relerr());

    let g = TorusField::random(16, TAU, 1e-3, 2, 3, 1);
    let tr = run_flow(&g, &FlowParams { dt: 0.05 * g.h(), steps: 2000 }).unwrap();
    println!("random: {:?}, monotone {}", tr.status.unwrap(), tr.monotone());
}
