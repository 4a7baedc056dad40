//! Decomposes the two-mode reference system and prints its optical netlist.

use lqsynth::io::{emit_netlist, emit_plan};
use lqsynth::linalg::{c, identity_c, CMat, RMat};
use lqsynth::optics::{build_netlist, NetlistOptions};
use lqsynth::{decompose, reassemble, OscillatorParams};

fn main() -> lqsynth::Result<()> {
    let mut r = RMat::identity(4, 4);
    r.view_mut((0, 0), (2, 2))
        .copy_from(&RMat::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 3.0]));
    let k = CMat::from_row_slice(1, 4, &[c(1.5, 0.0), c(0.0, 0.5), c(1.0, 0.0), c(0.0, 1.0)]);
    let g = OscillatorParams::new(identity_c(1), k, r)?;

    let plan = decompose(&g)?;
    println!("plan:\n{}", emit_plan(&plan));
    println!(
        "reassembly residual {:.1e}",
        reassemble(&plan)?.max_difference(&g)
    );

    let netlist = build_netlist(&plan, &NetlistOptions::default())?;
    println!("netlist:\n{}", emit_netlist(&netlist));
    Ok(())
}
