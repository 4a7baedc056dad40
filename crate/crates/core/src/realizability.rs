//! The bijection between oscillator parameters `(S, K, R)` and state-space
//! models `(A, B, C, D)`, and the physical realizability test.
//!
//! With noise input ordered `(dA, dA^#)`:
//!
//! ```text
//! A = 2Θ(R + Im K†K)    B = 2iΘ[−K†S, KᵀS^#]    C = SK    D = S
//! ```

use crate::error::{Error, Result};
use crate::linalg::{
    conj, imag_part, max_abs, max_abs_c, to_complex, unitarity_residual, CMat, RMat, I,
};
use crate::slh::{theta, validate_oscillator, OscillatorParams, DEFAULT_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace {
    /// `2n × 2n` real drift.
    pub a: RMat,
    /// `2n × 2m` noise input.
    pub b: CMat,
    /// `m × 2n` output map.
    pub c: CMat,
    /// `m × m` feedthrough.
    pub d: CMat,
}

impl StateSpace {
    pub fn new(a: RMat, b: CMat, c: CMat, d: CMat) -> Result<Self> {
        let ss = StateSpace { a, b, c, d };
        if let Some(detail) = ss.shape_problem() {
            return Err(Error::DimensionMismatch(detail));
        }
        Ok(ss)
    }

    pub fn dof(&self) -> usize {
        self.a.nrows() / 2
    }

    pub fn channels(&self) -> usize {
        self.d.nrows()
    }

    pub fn max_difference(&self, other: &StateSpace) -> f64 {
        if self.a.shape() != other.a.shape()
            || self.b.shape() != other.b.shape()
            || self.c.shape() != other.c.shape()
            || self.d.shape() != other.d.shape()
        {
            return f64::INFINITY;
        }
        max_abs(&(&self.a - &other.a))
            .max(max_abs_c(&(&self.b - &other.b)))
            .max(max_abs_c(&(&self.c - &other.c)))
            .max(max_abs_c(&(&self.d - &other.d)))
    }

    fn shape_problem(&self) -> Option<String> {
        let (ar, ac) = self.a.shape();
        if ar != ac || ar % 2 != 0 {
            return Some(format!("A is {ar}x{ac}, expected square of even size"));
        }
        let m = self.d.nrows();
        if self.d.ncols() != m {
            return Some(format!("D is {}x{}, expected square", m, self.d.ncols()));
        }
        if self.b.shape() != (ar, 2 * m) {
            return Some(format!(
                "B is {:?}, expected {:?}",
                self.b.shape(),
                (ar, 2 * m)
            ));
        }
        if self.c.shape() != (m, ar) {
            return Some(format!("C is {:?}, expected {:?}", self.c.shape(), (m, ar)));
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealizabilityReport {
    pub is_realizable: bool,
    /// `‖2i(AΘ + ΘAᵀ) + B J_f Bᵀ‖`
    pub ccr_residual: f64,
    pub d_unitarity_residual: f64,
    /// `‖C − DK‖` for the `K` recovered from `B`.
    pub c_consistency_residual: f64,
    /// `‖B₂ − 2iΘKᵀD^#‖` for the `K` recovered from `B₁`.
    pub b_consistency_residual: f64,
    /// Antisymmetric part of `−½ΘA − Im K†K`.
    pub hamiltonian_asymmetry: f64,
    pub dimension_error: Option<String>,
    pub recovered: Option<OscillatorParams>,
}

impl RealizabilityReport {
    fn dimension_failure(detail: String) -> Self {
        RealizabilityReport {
            is_realizable: false,
            ccr_residual: f64::INFINITY,
            d_unitarity_residual: f64::INFINITY,
            c_consistency_residual: f64::INFINITY,
            b_consistency_residual: f64::INFINITY,
            hamiltonian_asymmetry: f64::INFINITY,
            dimension_error: Some(detail),
            recovered: None,
        }
    }

    /// The residuals that exceed `tol`, by name.
    pub fn failures(&self, tol: f64) -> Vec<(&'static str, f64)> {
        [
            ("ccr", self.ccr_residual),
            ("d_unitarity", self.d_unitarity_residual),
            ("c_consistency", self.c_consistency_residual),
            ("b_consistency", self.b_consistency_residual),
            ("hamiltonian_asymmetry", self.hamiltonian_asymmetry),
        ]
        .into_iter()
        .filter(|(_, r)| !(*r <= tol))
        .collect()
    }
}

/// `J_f = [[0, I_m], [−I_m, 0]]`.
pub fn field_commutator(m: usize) -> CMat {
    let mut j = CMat::zeros(2 * m, 2 * m);
    for i in 0..m {
        j[(i, m + i)] = 1.0.into();
        j[(m + i, i)] = (-1.0).into();
    }
    j
}

pub fn to_state_space(g: &OscillatorParams) -> Result<StateSpace> {
    validate_oscillator(g, DEFAULT_TOL).into_result()?;
    let (n, m) = (g.dof(), g.channels());
    let th = theta(n);
    let th_c = to_complex(&th);
    let ktk = g.k.adjoint() * &g.k;
    let a = &th * (&g.r + imag_part(&ktk)) * 2.0;

    let mut b = CMat::zeros(2 * n, 2 * m);
    let left = -(g.k.adjoint() * &g.s);
    let right = g.k.transpose() * conj(&g.s);
    b.view_mut((0, 0), (2 * n, m)).copy_from(&left);
    b.view_mut((0, m), (2 * n, m)).copy_from(&right);
    let b = &th_c * b * (2.0 * I);

    Ok(StateSpace {
        a,
        b,
        c: &g.s * &g.k,
        d: g.s.clone(),
    })
}

pub fn check_physical_realizability(ss: &StateSpace, tol: f64) -> RealizabilityReport {
    if let Some(detail) = ss.shape_problem() {
        return RealizabilityReport::dimension_failure(detail);
    }
    let (n, m) = (ss.dof(), ss.channels());
    let th = theta(n);
    let th_c = to_complex(&th);
    let a_c = to_complex(&ss.a);

    let ccr = (&a_c * &th_c + &th_c * a_c.transpose()) * (2.0 * I)
        + &ss.b * field_commutator(m) * ss.b.transpose();
    let ccr_residual = max_abs_c(&ccr);
    let d_unitarity_residual = unitarity_residual(&ss.d);

    let b1 = ss.b.view((0, 0), (2 * n, m)).clone_owned();
    let b2 = ss.b.view((0, m), (2 * n, m)).clone_owned();
    let k_adj = &th_c * b1 * ss.d.adjoint() * (-0.5 * I);
    let k = k_adj.adjoint();
    let b_consistency_residual = max_abs_c(&(b2 - &th_c * k.transpose() * conj(&ss.d) * (2.0 * I)));
    let c_consistency_residual = max_abs_c(&(&ss.c - &ss.d * &k));

    let raw = &th * &ss.a * (-0.5) - imag_part(&(k.adjoint() * &k));
    let hamiltonian_asymmetry = max_abs(&(&raw - raw.transpose())) * 0.5;
    let r = (&raw + raw.transpose()) * 0.5;

    let mut report = RealizabilityReport {
        is_realizable: false,
        ccr_residual,
        d_unitarity_residual,
        c_consistency_residual,
        b_consistency_residual,
        hamiltonian_asymmetry,
        dimension_error: None,
        recovered: None,
    };
    report.is_realizable = report.failures(tol).is_empty();
    if report.is_realizable {
        report.recovered = Some(OscillatorParams {
            s: ss.d.clone(),
            k,
            r,
        });
    }
    report
}

pub fn from_state_space(ss: &StateSpace, tol: f64) -> Result<OscillatorParams> {
    let report = check_physical_realizability(ss, tol);
    if let Some(detail) = report.dimension_error {
        return Err(Error::DimensionMismatch(detail));
    }
    match report.recovered {
        Some(g) => Ok(g),
        None => {
            let parts: Vec<String> = report
                .failures(tol)
                .iter()
                .map(|(name, r)| format!("{name} residual {r:.3e}"))
                .collect();
            Err(Error::NotRealizable(parts.join(", ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity_c};
    use crate::testing::*;

    fn trivial_ss() -> StateSpace {
        StateSpace::new(
            RMat::zeros(2, 2),
            CMat::zeros(2, 2),
            CMat::zeros(1, 2),
            identity_c(1),
        )
        .unwrap()
    }

    #[test]
    fn cavity_state_space() {
        let ss = to_state_space(&cavity(1.0)).unwrap();
        assert!(max_abs(&(&ss.a + RMat::identity(2, 2) * 0.5)) < 1e-15);
        assert_eq!(ss.c, cavity(1.0).k);
        assert_eq!(ss.d, identity_c(1));
        // B₁ = −√γ·I in quadrature form: dq = −(γ/2)q dt − √γ dQ.
        assert!((ss.b[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((ss.b[(0, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((ss.b[(1, 0)] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((ss.b[(1, 1)] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn trivial_system() {
        let ss = to_state_space(&OscillatorParams::trivial(1, 1)).unwrap();
        assert_eq!(ss, trivial_ss());
        let back = from_state_space(&trivial_ss(), DEFAULT_TOL).unwrap();
        assert_eq!(back, OscillatorParams::trivial(1, 1));
    }

    #[test]
    fn golden_drift() {
        let ss = to_state_space(&golden_system()).unwrap();
        // Evaluated by hand: 2Θ(R + Im K†K) with Im K†K entries ±3/4, ±3/2, ±1/2, ±1.
        let expected = RMat::from_row_slice(
            4,
            4,
            &[
                -0.5, 6.0, -1.0, 0.0, //
                -4.0, -2.5, 0.0, -3.0, //
                -3.0, 0.0, -2.0, 2.0, //
                0.0, -1.0, -2.0, -2.0,
            ],
        );
        assert!(max_abs(&(&ss.a - expected)) < 1e-14);
    }

    #[test]
    fn cavity_round_trip() {
        let ss = to_state_space(&cavity(1.0)).unwrap();
        let rep = check_physical_realizability(&ss, DEFAULT_TOL);
        assert!(rep.is_realizable);
        assert!(rep.ccr_residual <= 1e-14);
        let g = from_state_space(&ss, DEFAULT_TOL).unwrap();
        assert!(g.max_difference(&cavity(1.0)) < 1e-12);
    }

    #[test]
    fn non_unitary_d_rejected() {
        let ss = StateSpace::new(
            RMat::zeros(2, 2),
            CMat::zeros(2, 4),
            CMat::zeros(2, 2),
            CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]),
        )
        .unwrap();
        assert!(matches!(
            from_state_space(&ss, DEFAULT_TOL),
            Err(Error::NotRealizable(_))
        ));
    }

    #[test]
    fn identity_drift_not_realizable() {
        let ss = StateSpace::new(
            RMat::identity(2, 2),
            CMat::zeros(2, 2),
            CMat::zeros(1, 2),
            identity_c(1),
        )
        .unwrap();
        let rep = check_physical_realizability(&ss, DEFAULT_TOL);
        assert!(!rep.is_realizable);
        assert!((rep.ccr_residual - 4.0).abs() < 1e-15);
        assert!(rep.recovered.is_none());
    }

    #[test]
    fn random_round_trips() {
        let mut rng = seeded(21);
        for i in 0..200 {
            let n = 1 + i % 4;
            let m = 1 + i % 3;
            let g = random_oscillator(&mut rng, n, m, 1.0);
            let ss = to_state_space(&g).unwrap();
            let rep = check_physical_realizability(&ss, 1e-10);
            assert!(rep.is_realizable, "{rep:?}");
            let back = rep.recovered.unwrap();
            assert!(back.max_difference(&g) < 1e-10);
            assert!(to_state_space(&back).unwrap().max_difference(&ss) < 1e-10);
        }
    }

    #[test]
    fn shape_mismatch_reported() {
        let ss = StateSpace {
            a: RMat::zeros(2, 2),
            b: CMat::zeros(2, 1),
            c: CMat::zeros(1, 2),
            d: identity_c(1),
        };
        let rep = check_physical_realizability(&ss, DEFAULT_TOL);
        assert!(rep.dimension_error.is_some());
        assert!(matches!(
            from_state_space(&ss, DEFAULT_TOL),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
