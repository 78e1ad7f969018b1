//! Hardy ratios over the built-in test families.

use kwlab::spectral::{hardy_suite, HardyFamily};

fn main() {
    let r = hardy_suite(&HardyFamily::default()).unwrap();
    for (name, sup) in &r.sup {
        println!("{name}: sup ratio {sup:.4}");
    }
    println!("near-extremal: {:.4}, all within constants: {}", r.near_extremal_sup, r.all_pass);
}
