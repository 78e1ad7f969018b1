//! Compares the difference-quotient Bochner remainder with the tabulated and
//! expanded forms of the zeroth-order term.

use kwlab::model::ModelSolution;
use kwlab::operator::{bochner_check, Background};

fn main() {
    let p = [0.8, 0.6, -0.5, 0.3];
    for bg in [Background::Nahm, Background::Model(ModelSolution::new(1)), Background::Model(ModelSolution::new(2))] {
        let r = bochner_check(&bg, &p, 2e-3).unwrap();
        println!(
            "{}: tabulated residual {:.2e} -> {:.2e}, expanded {:.2e} -> {:.2e}, flagged blocks {}",
            r.background,
            r.resid_printed[0],
            r.resid_printed[1],
            r.resid_derived[0],
            r.resid_derived[1],
            r.flagged_blocks.len()
        );
    }
}
