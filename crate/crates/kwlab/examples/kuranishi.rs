//! The Kuranishi fixed point in Fourier modes, on and off the harmonic slot.

use kwlab::flow::{kuranishi_fixed_point, kuranishi_w, linearized_decay, ModeVector};

fn main() {
    let b = [[0.3, -0.1, 0.2], [0.1, 0.25, -0.2], [-0.15, 0.05, 0.3]];
    let c = [[0.2, 0.1, -0.1], [0.05, -0.3, 0.15], [0.1, 0.2, 0.25]];
    let r = kuranishi_w(&ModeVector::h1(2, b, c), 1e-14).unwrap();
    println!("harmonic data: |phi| {:.3e}, |w| {:.3e}, residual {:.1e}", r.phi_norm, r.w_norm, r.residual);
    for s in [0.02, 0.01, 0.005] {
        let r = kuranishi_fixed_point(&ModeVector::random(1, 3).scaled(s), 1e-15).unwrap();
        println!("random data x{s}: |phi| {:.3e}, |w| {:.3e}, ratio {:.2e}", r.phi_norm, r.w_norm, r.contraction_ratio);
    }
    let d = linearized_decay(2, &ModeVector::random(2, 3), 5.0, 0.05).unwrap();
    println!("linearized decay rate {:.4}", d.min_plus_rate());
}
