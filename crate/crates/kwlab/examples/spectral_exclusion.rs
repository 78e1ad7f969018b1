//! Lowest Rayleigh quotient and the excluded λ-interval for each reduced case.

use kwlab::spectral::{exclusion_report, hemisphere_eig0, ExclusionCase};

fn main() {
    let h = hemisphere_eig0(2000).unwrap();
    println!("hemisphere: eigenvalue {:.6}", h.eigenvalue);
    for case in [ExclusionCase::B3Ct, ExclusionCase::Case2 { m: 1 }, ExclusionCase::Case3 { m: 1 }] {
        let r = exclusion_report(case).unwrap();
        println!("{}: mu_min {:.5}, covers [0, 3/2]: {}", case.name(), r.mu_min, r.covers_zero_to_three_halves);
    }
}
