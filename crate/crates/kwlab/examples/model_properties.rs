//! Property report and Richardson sweep for the first few model solutions.

use kwlab::model::{richardson_sweep, sample_points, ModelSolution};

fn main() {
    let pts = sample_points(200, 1);
    for m in 0..4 {
        let ms = ModelSolution::new(m);
        let rich = richardson_sweep(&ms, &pts, 1e-4).unwrap();
        let props = ms.verify_properties(500, 1).unwrap();
        let ratios: Vec<String> = rich.ratios().map(|r| format!("{r:.3}")).collect();
        println!("m = {m}: max residual {:.2e}, ratios [{}], properties pass: {}", rich.max_residual, ratios.join(", "), props.all_pass());
    }
}
