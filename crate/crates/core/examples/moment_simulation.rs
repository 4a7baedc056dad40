//! Mean and covariance dynamics of a detuned cavity driven by squeezed vacuum.

use lqsynth::linalg::{c, identity_c, CMat, RMat};
use lqsynth::moments::{simulate, ChannelStats, ItoTable, SimulationSettings};
use lqsynth::{to_state_space, OscillatorParams};
use nalgebra::DVector;

fn main() -> lqsynth::Result<()> {
    let k = CMat::from_row_slice(1, 2, &[c(0.5, 0.0), c(0.0, 0.5)]);
    let g = OscillatorParams::new(identity_c(1), k, RMat::identity(2, 2) * 0.2)?;
    let ss = to_state_space(&g)?;

    let table = ItoTable::squeezed(&[ChannelStats::squeezed(0.5, 0.0)])?;
    let settings = SimulationSettings::new(10.0, 1e-3).every(1000);
    let mean = DVector::from_vec(vec![1.0, 0.0]);
    let tr = simulate(&ss, &mean, &RMat::identity(2, 2), &settings, &table)?;

    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "t", "<q>", "<p>", "<qq>", "<qp>", "<pp>"
    );
    for ((t, m), s) in tr.times.iter().zip(&tr.means).zip(&tr.second_moments) {
        println!(
            "{t:>6.2} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            m[0],
            m[1],
            s[(0, 0)],
            s[(0, 1)],
            s[(1, 1)]
        );
    }
    Ok(())
}
