//! Quantum-optical realization of synthesis plans.

pub mod coupling;
pub mod devices;
pub mod mesh;
pub mod netlist;
pub mod quasi_unitary;

pub use coupling::{
    coupling_scheme1, coupling_scheme2, default_gamma2, direct_to_optics, dpa_from_r,
    quadrature_to_mode, DirectOptics, DpaParams, ModeCoupling, Scheme1Params, Scheme2Params,
};
pub use devices::{
    squeezed_field_params, squeezer_transformation, BeamSplitterParams, CavityParams, MirrorParams,
    PhaseShifterParams, SqueezedFieldParams, SqueezerParams, TwoModeSqueezerParams,
};
pub use mesh::{mesh_matrix, passive_unitary_to_mesh, MeshElement};
pub use netlist::{build_netlist, NetlistOptions, OpticalNetlist};
pub use quasi_unitary::{quasiunitary_decompose, QuasiUnitaryDecomposition};
