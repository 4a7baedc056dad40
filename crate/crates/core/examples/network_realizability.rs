//! Builds a cascaded network of two cavities, reduces it to one oscillator
//! and checks that its state-space form is physically realizable.

use lqsynth::linalg::{c, identity_c, CMat, RMat};
use lqsynth::slh::{DirectCoupling, NetworkSpec, SeriesConnection};
use lqsynth::{
    check_physical_realizability, from_state_space, reduce_network, to_state_space,
    OscillatorParams,
};

fn cavity(gamma: f64, detuning: f64) -> lqsynth::Result<OscillatorParams> {
    let h = gamma.sqrt() / 2.0;
    let k = CMat::from_row_slice(1, 2, &[c(h, 0.0), c(0.0, h)]);
    OscillatorParams::new(identity_c(1), k, RMat::identity(2, 2) * (detuning / 2.0))
}

fn main() -> lqsynth::Result<()> {
    let network = NetworkSpec {
        oscillators: vec![cavity(1.0, 0.5)?, cavity(2.0, -0.3)?],
        series: vec![SeriesConnection { from: 0, to: 1 }],
        couplings: vec![DirectCoupling::new(
            0,
            1,
            RMat::from_row_slice(2, 2, &[0.0, -0.5, 1.5, 0.0]),
        )?],
    };
    let g = reduce_network(&network)?;
    println!("reduced: n = {}, m = {}", g.dof(), g.channels());

    let ss = to_state_space(&g)?;
    println!("A =\n{:.4}", ss.a);
    let report = check_physical_realizability(&ss, 1e-10);
    println!(
        "realizable: {} (CCR residual {:.1e})",
        report.is_realizable, report.ccr_residual
    );

    let back = from_state_space(&ss, 1e-10)?;
    println!(
        "SKR -> ABCD -> SKR residual {:.1e}",
        back.max_difference(&g)
    );

    let mut off = ss.clone();
    off.a += RMat::identity(4, 4) * 1e-3;
    println!(
        "perturbed A realizable: {}",
        check_physical_realizability(&off, 1e-10).is_realizable
    );
    Ok(())
}
