//! Checks the fixed 8×8 Clifford matrices and prints the Nahm-pole spectrum.

use kwlab::clifford::{cluster, derived_endos, load_clifford, nahm_pole_endo};

fn main() {
    let cl = load_clifford();
    let checks = cl.relation_checks();
    let bad = checks.iter().filter(|c| !c.holds).count();
    println!("{} relations, {bad} failing", checks.len());
    for t in [0.5, 1.0, 2.0] {
        let spec = nahm_pole_endo(&cl, t).unwrap().symmetric_spectrum();
        println!("t = {t}: {:?}", cluster(&spec, 1e-9));
    }
    let d = derived_endos(&cl);
    println!("Q spectrum: {:?}", cluster(&d.q.antisymmetric_spectrum(), 1e-9));
}
