//! Synthesis of linear quantum stochastic systems into quantum-optical
//! networks.
//!
//! The pipeline runs from an `(S, K, R)` oscillator (or an `(A, B, C, D)`
//! state-space model) through a cascade of one-mode oscillators with direct
//! couplings ([`synthesis`]) to a netlist of optical components
//! ([`optics`]). Every stage can be checked algebraically and by moment
//! simulation ([`moments`]).

pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod moments;
pub mod optics;
pub mod quadratic;
pub mod random;
pub mod realizability;
pub mod report;
pub mod slh;
pub mod synthesis;

#[cfg(test)]
pub(crate) mod testing;

pub use error::{Error, Result};
pub use realizability::{
    check_physical_realizability, from_state_space, to_state_space, RealizabilityReport, StateSpace,
};
pub use slh::{
    add_direct_interaction, concatenate, make_commutation_matrix, reduce_network, series,
    validate_oscillator, CommutationMatrix, DirectCoupling, NetworkSpec, OscillatorParams,
    SeriesConnection, ValidationReport,
};
pub use synthesis::{allocate_scattering, decompose, reassemble, OneDofBlock, SynthesisPlan};
