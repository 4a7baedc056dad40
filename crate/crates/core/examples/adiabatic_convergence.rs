//! Convergence of the pre-limit auxiliary-cavity model to its adiabatic limit.

use lqsynth::linalg::{c, RMat};
use lqsynth::moments::{convergence_study, AdiabaticModelParams};

fn main() -> lqsynth::Result<()> {
    let p = AdiabaticModelParams::from_pumps(1.0, 100.0, c(10.0, 0.0), c(-20.0, 0.0));
    let probe = RMat::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
    let start = std::time::Instant::now();
    let points = convergence_study(&p, &[2.0, 4.0, 8.0, 16.0], 5.0, 1e-3, &probe)?;
    for pt in &points {
        println!("k = {:>4}  error = {:.4e}", pt.k, pt.error);
    }
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
