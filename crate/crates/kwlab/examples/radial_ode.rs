//! Admissibility of the radial system across λ at fixed k. At the window
//! edges the fitted exponent sits on −1 and the verdict is reported as
//! ambiguous.

use kwlab::spectral::radial_admissible;

fn main() {
    for lambda in [-0.5, 0.0, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0] {
        match radial_admissible(lambda, 1.0) {
            Ok(a) => println!("lambda {lambda:5}: exponent at 0 {:8.4}, admissible {}", a.exponent_at_zero, a.admissible),
            Err(e) => println!("lambda {lambda:5}: {e}"),
        }
    }
}
