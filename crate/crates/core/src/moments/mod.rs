//! Gaussian moment dynamics of linear QSDEs and the adiabatic-elimination
//! models used to check them.

pub mod adiabatic;
pub mod integrate;
pub mod ito;

pub use adiabatic::{
    adiabatic_limit, adiabatic_prelimit, convergence_study, AdiabaticModelParams, ConvergencePoint,
};
pub use integrate::{
    compare_systems, covariance_trajectory, diffusion_matrix, mean_trajectory, simulate,
    MomentTrajectory, SimulationSettings,
};
pub use ito::{ito_table, ChannelStats, InputField, ItoTable};
