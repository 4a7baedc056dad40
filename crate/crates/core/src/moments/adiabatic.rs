//! Pre-limit and limit models for the elimination of a heavily damped
//! auxiliary cavity, and the convergence study comparing them.
//!
//! The pre-limit family couples a slow mode `a` to an auxiliary mode `b`:
//!
//! ```text
//! L = (√γ₁ a, k√γ₂ b)ᵀ
//! H = Δ₁a*a + k²Δ₂b*b + k(αa*b + βa*b* + α*ab* + β*ab)
//! ```

use std::thread;

use num_complex::Complex64;

use super::integrate::{covariance_trajectory, SimulationSettings};
use super::ito::ItoTable;
use crate::error::{Error, Result};
use crate::linalg::{block_diag, c, identity_c, max_abs, CMat, RMat};
use crate::quadratic::{hamiltonian_matrix, linear_row, Ladder};
use crate::realizability::to_state_space;
use crate::slh::OscillatorParams;

use Ladder::{Lower, Raise};

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdiabaticModelParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl AdiabaticModelParams {
    /// Resonant model whose limit coupling is `(−ε₂*a + ε₁a*)/√γ₂`.
    pub fn from_pumps(gamma1: f64, gamma2: f64, eps1: Complex64, eps2: Complex64) -> Self {
        AdiabaticModelParams {
            gamma1,
            gamma2,
            delta1: 0.0,
            delta2: 0.0,
            alpha: c(0.0, 0.5) * eps2,
            beta: c(0.0, 0.5) * eps1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.gamma1, self.gamma2, self.delta1, self.delta2]
            .iter()
            .all(|x| x.is_finite())
            && self.alpha.is_finite()
            && self.beta.is_finite();
        if !finite {
            return Err(Error::InvalidParameter(
                "adiabatic model parameters must be finite".into(),
            ));
        }
        if !(self.gamma1 > 0.0 && self.gamma2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "damping rates must be positive, got gamma1 = {}, gamma2 = {}",
                self.gamma1, self.gamma2
            )));
        }
        Ok(())
    }
}

pub fn adiabatic_prelimit(p: &AdiabaticModelParams, k: f64) -> Result<OscillatorParams> {
    p.validate()?;
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "scale k must be at least 1, got {k}"
        )));
    }
    let (a, b) = (0, 1);
    let mut kmat = CMat::zeros(2, 4);
    kmat.row_mut(0)
        .copy_from(&linear_row(2, &[(c(p.gamma1.sqrt(), 0.0), Lower(a))]));
    kmat.row_mut(1)
        .copy_from(&linear_row(2, &[(c(k * p.gamma2.sqrt(), 0.0), Lower(b))]));
    let kc = c(k, 0.0);
    let terms = [
        (c(p.delta1, 0.0), Raise(a), Lower(a)),
        (c(k * k * p.delta2, 0.0), Raise(b), Lower(b)),
        (kc * p.alpha, Raise(a), Lower(b)),
        (kc * p.beta, Raise(a), Raise(b)),
        (kc * p.alpha.conj(), Lower(a), Raise(b)),
        (kc * p.beta.conj(), Lower(a), Lower(b)),
    ];
    let r = hamiltonian_matrix(2, &terms, HERMITIAN_TOL)?;
    OscillatorParams::new(identity_c(2), kmat, r)
}

pub fn adiabatic_limit(p: &AdiabaticModelParams) -> Result<OscillatorParams> {
    p.validate()?;
    let (g2, d2) = (p.gamma2, p.delta2);
    let s22 = c(g2, 2.0 * d2) / c(-g2, 2.0 * d2);
    let z = c(0.0, g2.sqrt()) / c(-g2 / 2.0, -d2);
    let mut s = identity_c(2);
    s[(1, 1)] = s22;
    let mut kmat = CMat::zeros(2, 2);
    kmat.row_mut(0)
        .copy_from(&linear_row(1, &[(c(p.gamma1.sqrt(), 0.0), Lower(0))]));
    kmat.row_mut(1).copy_from(&linear_row(
        1,
        &[(z * p.alpha.conj(), Lower(0)), (z * p.beta, Raise(0))],
    ));
    let g = c(-d2 / (d2 * d2 + g2 * g2 / 4.0), 0.0);
    let terms = [
        (c(p.delta1, 0.0), Raise(0), Lower(0)),
        (g * p.alpha.norm_sqr(), Raise(0), Lower(0)),
        (g * p.alpha * p.beta, Raise(0), Raise(0)),
        (g * (p.alpha * p.beta).conj(), Lower(0), Lower(0)),
        (g * p.beta.norm_sqr(), Lower(0), Raise(0)),
    ];
    let r = hamiltonian_matrix(1, &terms, HERMITIAN_TOL)?;
    OscillatorParams::new(s, kmat, r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergencePoint {
    pub k: f64,
    pub error: f64,
}

/// Slow-block second-moment error of each pre-limit model against the limit
/// model. The auxiliary mode starts in vacuum and the slow mode at `probe`.
/// Pre-limit runs use `dt / round(k²)` and are sampled on the limit grid.
pub fn convergence_study(
    p: &AdiabaticModelParams,
    ks: &[f64],
    t_final: f64,
    dt: f64,
    probe: &RMat,
) -> Result<Vec<ConvergencePoint>> {
    p.validate()?;
    if probe.shape() != (2, 2) {
        return Err(Error::DimensionMismatch(format!(
            "probe must be 2x2, got {:?}",
            probe.shape()
        )));
    }
    if ks.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "scales must be strictly increasing".into(),
        ));
    }
    let limit_ss = to_state_space(&adiabatic_limit(p)?)?;
    let table = ItoTable::vacuum(2);
    let base = SimulationSettings::new(t_final, dt);
    let limit = covariance_trajectory(&limit_ss, probe, &base, &table)?;
    let initial = block_diag(probe, &RMat::identity(2, 2));

    let run = |k: f64| -> Result<ConvergencePoint> {
        let ss = to_state_space(&adiabatic_prelimit(p, k)?)?;
        let ratio = ((k * k).round() as usize).max(1);
        let settings = SimulationSettings::new(t_final, dt / ratio as f64).every(ratio);
        let tr = covariance_trajectory(&ss, &initial, &settings, &table)?;
        if tr.len() != limit.len() {
            return Err(Error::Consistency(format!(
                "sample grids differ: {} against {}",
                tr.len(),
                limit.len()
            )));
        }
        let error = tr
            .second_moments
            .iter()
            .zip(&limit.second_moments)
            .map(|(m, l)| max_abs(&(m.view((0, 0), (2, 2)) - l)))
            .fold(0.0, f64::max);
        Ok(ConvergencePoint { k, error })
    };

    thread::scope(|scope| {
        let handles: Vec<_> = ks.iter().map(|&k| scope.spawn(move || run(k))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("convergence worker panicked"))
            .collect()
    })
}
