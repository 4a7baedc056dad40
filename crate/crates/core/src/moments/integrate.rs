//! Mean and second-moment dynamics of linear QSDEs with Gaussian inputs,
//! integrated by the classic fourth-order Runge-Kutta method:
//!
//! ```text
//! d⟨x⟩/dt = A⟨x⟩
//! dM/dt   = AM + MAᵀ + Re[B · ½(F + Fᵀ) · Bᵀ]
//! ```
//!
//! where `M` is the symmetrized second moment `Re⟨xxᵀ⟩` and `F` the Itô
//! table of the input.

use nalgebra::DVector;

use super::ito::ItoTable;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, symmetry_residual, RMat};
use crate::realizability::StateSpace;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationSettings {
    pub t_final: f64,
    pub dt: f64,
    /// Record every this many steps (the final state is always recorded).
    pub record_every: usize,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        SimulationSettings {
            t_final: 10.0,
            dt: 1e-3,
            record_every: 1,
        }
    }
}

impl SimulationSettings {
    pub fn new(t_final: f64, dt: f64) -> Self {
        SimulationSettings {
            t_final,
            dt,
            record_every: 1,
        }
    }

    pub fn every(mut self, stride: usize) -> Self {
        self.record_every = stride.max(1);
        self
    }

    /// Number of steps and the step length that lands exactly on `t_final`.
    fn grid(&self) -> Result<(usize, f64)> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "final time must be nonnegative, got {}",
                self.t_final
            )));
        }
        let steps = (self.t_final / self.dt).round() as usize;
        if steps == 0 {
            return Ok((0, 0.0));
        }
        Ok((steps, self.t_final / steps as f64))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MomentTrajectory {
    pub times: Vec<f64>,
    /// Empty when only second moments were integrated.
    pub means: Vec<DVector<f64>>,
    /// Empty when only means were integrated.
    pub second_moments: Vec<RMat>,
}

impl MomentTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest entrywise deviation of means and second moments at matching
    /// samples.
    pub fn max_deviation(&self, other: &MomentTrajectory) -> Result<f64> {
        if self.times.len() != other.times.len()
            || self.means.len() != other.means.len()
            || self.second_moments.len() != other.second_moments.len()
        {
            return Err(Error::DimensionMismatch(
                "trajectories have different lengths".into(),
            ));
        }
        let mut dev = 0.0f64;
        for (a, b) in self.means.iter().zip(&other.means) {
            dev = dev.max((a - b).amax());
        }
        for (a, b) in self.second_moments.iter().zip(&other.second_moments) {
            dev = dev.max(max_abs(&(a - b)));
        }
        Ok(dev)
    }
}

/// `Re[B · ½(F + Fᵀ) · Bᵀ]`
pub fn diffusion_matrix(ss: &StateSpace, table: &ItoTable) -> Result<RMat> {
    if table.m != ss.channels() {
        return Err(Error::DimensionMismatch(format!(
            "Itô table has {} channels, system has {}",
            table.m,
            ss.channels()
        )));
    }
    Ok((&ss.b * table.symmetric() * ss.b.transpose()).map(|z| z.re))
}

pub fn mean_trajectory(
    ss: &StateSpace,
    m0: &DVector<f64>,
    settings: &SimulationSettings,
) -> Result<MomentTrajectory> {
    check_state(ss, m0.len())?;
    let (steps, h) = settings.grid()?;
    let a = &ss.a;
    let n2 = a.nrows();
    let mut x = m0.clone();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        DVector::zeros(n2),
        DVector::zeros(n2),
        DVector::zeros(n2),
        DVector::zeros(n2),
        DVector::zeros(n2),
    );
    let mut out = MomentTrajectory::default();
    out.times.push(0.0);
    out.means.push(x.clone());
    for step in 1..=steps {
        k1.gemv(1.0, a, &x, 0.0);
        tmp.copy_from(&x);
        tmp.axpy(0.5 * h, &k1, 1.0);
        k2.gemv(1.0, a, &tmp, 0.0);
        tmp.copy_from(&x);
        tmp.axpy(0.5 * h, &k2, 1.0);
        k3.gemv(1.0, a, &tmp, 0.0);
        tmp.copy_from(&x);
        tmp.axpy(h, &k3, 1.0);
        k4.gemv(1.0, a, &tmp, 0.0);
        x.axpy(h / 6.0, &k1, 1.0);
        x.axpy(h / 3.0, &k2, 1.0);
        x.axpy(h / 3.0, &k3, 1.0);
        x.axpy(h / 6.0, &k4, 1.0);
        if step % settings.record_every == 0 || step == steps {
            out.times.push(step as f64 * h);
            out.means.push(x.clone());
        }
    }
    Ok(out)
}

/// `y += a·x`
fn axpy(y: &mut RMat, a: f64, x: &RMat) {
    y.zip_apply(x, |yi, xi| *yi += a * xi);
}

/// `out = A·M + M·Aᵀ + N` for symmetric `M`.
fn lyapunov_rhs(a: &RMat, m: &RMat, noise: &RMat, scratch: &mut RMat, out: &mut RMat) {
    scratch.gemm(1.0, a, m, 0.0);
    let n = m.nrows();
    for j in 0..n {
        for i in 0..n {
            out[(i, j)] = noise[(i, j)] + scratch[(i, j)] + scratch[(j, i)];
        }
    }
}

pub fn covariance_trajectory(
    ss: &StateSpace,
    m0: &RMat,
    settings: &SimulationSettings,
    table: &ItoTable,
) -> Result<MomentTrajectory> {
    check_state(ss, m0.nrows())?;
    if m0.ncols() != m0.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "second moment is {:?}",
            m0.shape()
        )));
    }
    let residual = symmetry_residual(m0);
    if residual > 1e-12 * max_abs(m0).max(1.0) {
        return Err(Error::NotSymmetric { residual });
    }
    let noise = diffusion_matrix(ss, table)?;
    let (steps, h) = settings.grid()?;
    let a = &ss.a;
    let n2 = a.nrows();
    let mut m = m0.clone();
    let z = || RMat::zeros(n2, n2);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp, mut am) = (z(), z(), z(), z(), z(), z());
    let mut out = MomentTrajectory::default();
    out.times.push(0.0);
    out.second_moments.push(m.clone());
    for step in 1..=steps {
        lyapunov_rhs(a, &m, &noise, &mut am, &mut k1);
        tmp.copy_from(&m);
        axpy(&mut tmp, 0.5 * h, &k1);
        lyapunov_rhs(a, &tmp, &noise, &mut am, &mut k2);
        tmp.copy_from(&m);
        axpy(&mut tmp, 0.5 * h, &k2);
        lyapunov_rhs(a, &tmp, &noise, &mut am, &mut k3);
        tmp.copy_from(&m);
        axpy(&mut tmp, h, &k3);
        lyapunov_rhs(a, &tmp, &noise, &mut am, &mut k4);
        axpy(&mut m, h / 6.0, &k1);
        axpy(&mut m, h / 3.0, &k2);
        axpy(&mut m, h / 3.0, &k3);
        axpy(&mut m, h / 6.0, &k4);
        if step % settings.record_every == 0 || step == steps {
            out.times.push(step as f64 * h);
            out.second_moments.push(m.clone());
        }
    }
    Ok(out)
}

/// Means and second moments together.
pub fn simulate(
    ss: &StateSpace,
    m0: &DVector<f64>,
    second0: &RMat,
    settings: &SimulationSettings,
    table: &ItoTable,
) -> Result<MomentTrajectory> {
    let means = mean_trajectory(ss, m0, settings)?;
    let mut cov = covariance_trajectory(ss, second0, settings, table)?;
    cov.means = means.means;
    Ok(cov)
}

fn check_state(ss: &StateSpace, len: usize) -> Result<()> {
    if ss.a.nrows() != len {
        return Err(Error::DimensionMismatch(format!(
            "initial state has length {len}, system has {} quadratures",
            ss.a.nrows()
        )));
    }
    Ok(())
}

/// Largest deviation between two systems driven by vacuum, over every probe
/// `(mean, second moment)` and every recorded time.
pub fn compare_systems(
    ss_a: &StateSpace,
    ss_b: &StateSpace,
    probes: &[(DVector<f64>, RMat)],
    settings: &SimulationSettings,
) -> Result<f64> {
    if ss_a.dof() != ss_b.dof() || ss_a.channels() != ss_b.channels() {
        return Err(Error::DimensionMismatch(format!(
            "systems differ in shape: n = {}/{}, m = {}/{}",
            ss_a.dof(),
            ss_b.dof(),
            ss_a.channels(),
            ss_b.channels()
        )));
    }
    let table = ItoTable::vacuum(ss_a.channels());
    let mut worst = 0.0f64;
    for (mean, second) in probes {
        let ta = simulate(ss_a, mean, second, settings, &table)?;
        let tb = simulate(ss_b, mean, second, settings, &table)?;
        worst = worst.max(ta.max_deviation(&tb)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_c, to_complex, CMat};
    use crate::moments::ito::ChannelStats;
    use crate::realizability::{field_commutator, to_state_space};
    use crate::slh::theta;
    use crate::testing::*;

    fn cavity_ss(gamma: f64) -> StateSpace {
        to_state_space(&cavity(gamma)).unwrap()
    }

    #[test]
    fn cavity_mean_decay() {
        let ss = cavity_ss(1.0);
        let tr = mean_trajectory(
            &ss,
            &DVector::from_vec(vec![1.0, 0.0]),
            &SimulationSettings::new(1.0, 1e-3),
        )
        .unwrap();
        let last = tr.means.last().unwrap();
        assert!((last[0] - (-0.5f64).exp()).abs() < 1e-8);
        assert!(last[1].abs() < 1e-15);
        assert_eq!(tr.times.len(), 1001);
        assert!((tr.times.last().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_drift_keeps_mean() {
        let ss = to_state_space(&crate::slh::OscillatorParams::trivial(2, 1)).unwrap();
        let m0 = DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]);
        let tr = mean_trajectory(&ss, &m0, &SimulationSettings::new(2.0, 0.1)).unwrap();
        assert!(tr.means.iter().all(|m| m == &m0));
    }

    #[test]
    fn golden_mean_matches_exponential() {
        let ss = to_state_space(&golden_system()).unwrap();
        let m0 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let tr = mean_trajectory(&ss, &m0, &SimulationSettings::new(1.0, 1e-3)).unwrap();
        let oracle = ss.a.clone().exp() * &m0;
        assert!((tr.means.last().unwrap() - oracle).amax() < 1e-8);
    }

    #[test]
    fn vacuum_fixed_point() {
        let ss = cavity_ss(1.0);
        let tr = covariance_trajectory(
            &ss,
            &RMat::identity(2, 2),
            &SimulationSettings::new(10.0, 1e-3).every(100),
            &ItoTable::vacuum(1),
        )
        .unwrap();
        for m in &tr.second_moments {
            assert!(max_abs(&(m - RMat::identity(2, 2))) < 1e-8);
        }
    }

    #[test]
    fn excited_cavity_relaxes() {
        let ss = cavity_ss(1.0);
        let tr = covariance_trajectory(
            &ss,
            &(RMat::identity(2, 2) * 2.0),
            &SimulationSettings::new(1.0, 1e-3),
            &ItoTable::vacuum(1),
        )
        .unwrap();
        let last = tr.second_moments.last().unwrap();
        let want = 1.0 + (-1.0f64).exp();
        assert!((last[(0, 0)] - want).abs() < 1e-8);
        assert!((last[(1, 1)] - want).abs() < 1e-8);
    }

    #[test]
    fn golden_covariance_matches_exponential() {
        // Without noise M(t) = e^{At} M0 e^{Aᵀt}.
        let mut ss = to_state_space(&golden_system()).unwrap();
        ss.b.fill(crate::linalg::c(0.0, 0.0));
        let m0 = RMat::from_fn(4, 4, |i, j| if i == j { 2.0 } else { 0.1 * (i + j) as f64 });
        let tr = covariance_trajectory(
            &ss,
            &m0,
            &SimulationSettings::new(1.0, 1e-3),
            &ItoTable::vacuum(1),
        )
        .unwrap();
        let e = ss.a.clone().exp();
        let oracle = &e * &m0 * e.transpose();
        assert!(max_abs(&(tr.second_moments.last().unwrap() - oracle)) < 1e-8);
    }

    #[test]
    fn no_noise_no_drift_is_constant() {
        let ss = to_state_space(&crate::slh::OscillatorParams::trivial(1, 1)).unwrap();
        let m0 = RMat::from_row_slice(2, 2, &[2.0, 0.1, 0.1, 1.0]);
        let tr = covariance_trajectory(
            &ss,
            &m0,
            &SimulationSettings::new(1.0, 0.01),
            &ItoTable::vacuum(1),
        )
        .unwrap();
        assert!(tr.second_moments.iter().all(|m| m == &m0));
    }

    #[test]
    fn diffusion_is_real_and_matches_commutator_identity() {
        let mut rng = seeded(50);
        for i in 0..30 {
            let (n, m) = (1 + i % 3, 1 + i % 2);
            let ss = to_state_space(&random_oscillator(&mut rng, n, m, 1.0)).unwrap();
            let chans: Vec<_> = (0..m)
                .map(|j| ChannelStats::squeezed(0.3 * j as f64, 0.7))
                .collect();
            let table = ItoTable::squeezed(&chans).unwrap();
            let full = &ss.b * table.symmetric() * ss.b.transpose();
            assert!(full.iter().all(|z| z.im.abs() < 1e-10));
            // 2i(AΘ + ΘAᵀ) + B(F − Fᵀ)Bᵀ = 0
            assert!(max_abs_c(&(table.commutator() - field_commutator(m))) < 1e-15);
            let th = to_complex(&theta(n));
            let a = to_complex(&ss.a);
            let ccr: CMat = (&a * &th + &th * a.transpose()) * crate::linalg::c(0.0, 2.0)
                + &ss.b * table.commutator() * ss.b.transpose();
            assert!(max_abs_c(&ccr) < 1e-10);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let ss = to_state_space(&golden_system()).unwrap();
        let m0 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let oracle = ss.a.clone().exp() * &m0;
        let err = |dt: f64| {
            let tr = mean_trajectory(&ss, &m0, &SimulationSettings::new(1.0, dt)).unwrap();
            (tr.means.last().unwrap() - &oracle).amax()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn compare_detects_perturbation() {
        let a = cavity_ss(1.0);
        let b = cavity_ss(1.001);
        let probe = vec![(
            DVector::from_vec(vec![1.0, 0.0]),
            RMat::identity(2, 2) * 2.0,
        )];
        let s = SimulationSettings::new(5.0, 1e-3).every(10);
        assert_eq!(compare_systems(&a, &a, &probe, &s).unwrap(), 0.0);
        assert!(compare_systems(&a, &b, &probe, &s).unwrap() > 1e-4);
        let c2 = to_state_space(&golden_system()).unwrap();
        assert!(compare_systems(&a, &c2, &probe, &s).is_err());
    }

    #[test]
    fn bad_inputs_rejected() {
        let ss = cavity_ss(1.0);
        let bad = RMat::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(covariance_trajectory(
            &ss,
            &bad,
            &SimulationSettings::default(),
            &ItoTable::vacuum(1)
        )
        .is_err());
        assert!(
            mean_trajectory(&ss, &DVector::zeros(2), &SimulationSettings::new(1.0, 0.0)).is_err()
        );
        assert!(mean_trajectory(&ss, &DVector::zeros(3), &SimulationSettings::default()).is_err());
    }
}
