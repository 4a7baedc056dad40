//! Static optical devices and the parameter records of every netlist
//! component.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, max_abs_c, CMat, I};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseShifterParams {
    pub theta: f64,
}

impl PhaseShifterParams {
    /// Field transformation `a' = e^{iθ}a`.
    pub fn gain(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// `Q_PS = diag(e^{iθ}, e^{−iθ})`.
    pub fn quasi_unitary(&self) -> CMat {
        CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            self.gain(),
            self.gain().conj(),
        ]))
    }
}

/// Beam splitter with mixing angle `theta` and phases `phi` (inputs),
/// `psi` (outputs) and `xi` (overall).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamSplitterParams {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
    pub xi: f64,
}

impl BeamSplitterParams {
    pub fn mixing(theta: f64) -> Self {
        BeamSplitterParams {
            theta,
            phi: 0.0,
            psi: 0.0,
            xi: 0.0,
        }
    }

    /// `B = e^{iΞ/2} diag(e^{iΨ/2}, e^{−iΨ/2}) R(Θ) diag(e^{iΦ/2}, e^{−iΦ/2})`
    /// with `R(Θ) = [[cos Θ, sin Θ], [−sin Θ, cos Θ]]`.
    pub fn matrix(&self) -> CMat {
        let half = |x: f64| Complex64::from_polar(1.0, x / 2.0);
        let (s, co) = self.theta.sin_cos();
        let out = [half(self.psi), half(-self.psi)];
        let inp = [half(self.phi), half(-self.phi)];
        let rot = [[co, s], [-s, co]];
        let g = half(self.xi);
        DMatrix::from_fn(2, 2, |i, j| g * out[i] * rot[i][j] * inp[j])
    }

    /// Euler angles of a 2×2 unitary; the inverse of [`Self::matrix`] with
    /// `Θ ∈ [0, π/2]`.
    pub fn from_unitary(w: &CMat) -> Result<Self> {
        if w.shape() != (2, 2) {
            return Err(Error::DimensionMismatch(format!(
                "beam splitter matrix must be 2x2, got {:?}",
                w.shape()
            )));
        }
        let residual = crate::linalg::unitarity_residual(w);
        if residual > 1e-9 {
            return Err(Error::NotUnitary { residual });
        }
        let det = w[(0, 0)] * w[(1, 1)] - w[(0, 1)] * w[(1, 0)];
        let xi = det.arg();
        let v = w * Complex64::from_polar(1.0, -xi / 2.0);
        let (a, b) = (v[(0, 0)], v[(0, 1)]);
        let theta = b.norm().atan2(a.norm());
        let sigma = if a.norm() > 1e-300 { a.arg() } else { 0.0 };
        let delta = if b.norm() > 1e-300 { b.arg() } else { 0.0 };
        Ok(BeamSplitterParams {
            theta,
            phi: sigma - delta,
            psi: sigma + delta,
            xi,
        })
    }

    /// Coefficient `α` of the effective Hamiltonian `αa₁*a₂ + α*a₁a₂*`
    /// (meaningful when `Ξ = 0`, `Ψ = −Φ`).
    pub fn hamiltonian_coefficient(&self) -> Complex64 {
        I * self.theta * Complex64::from_polar(1.0, -self.phi)
    }
}

/// Two-mode squeezer `H = (i/2)(ε a₁*a₂* − ε* a₁a₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeSqueezerParams {
    pub pump: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezerParams {
    pub s: f64,
    pub theta: f64,
}

impl SqueezerParams {
    pub fn matrix(&self) -> CMat {
        squeezer_transformation(self.s, self.theta).0
    }

    pub fn inverse(&self) -> SqueezerParams {
        SqueezerParams {
            s: -self.s,
            theta: self.theta,
        }
    }
}

/// Partially transmitting mirror with coupling coefficient `kappa`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MirrorParams {
    pub kappa: f64,
}

/// Ring cavity resonance offset from the reference frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityParams {
    pub detuning: f64,
}

/// `G = diag(I_m, −I_m)`.
pub fn quasi_metric(m: usize) -> CMat {
    CMat::from_fn(2 * m, 2 * m, |i, j| {
        if i != j {
            c(0.0, 0.0)
        } else if i < m {
            c(1.0, 0.0)
        } else {
            c(-1.0, 0.0)
        }
    })
}

/// `‖QGQ† − G‖`.
pub fn quasi_unitarity_residual(q: &CMat) -> f64 {
    if q.nrows() != q.ncols() || q.nrows() % 2 != 0 {
        return f64::INFINITY;
    }
    let g = quasi_metric(q.nrows() / 2);
    max_abs_c(&(q * &g * q.adjoint() - g))
}

/// Squeezer matrix `Q` and its inverse `Q(−s, θ)`.
pub fn squeezer_transformation(s: f64, theta: f64) -> (CMat, CMat) {
    let build = |s: f64| {
        let (sh, ch) = (s.sinh(), s.cosh());
        let e = Complex64::from_polar(1.0, theta);
        CMat::from_row_slice(2, 2, &[c(ch, 0.0), e * sh, e.conj() * sh, c(ch, 0.0)])
    };
    (build(s), build(-s))
}

/// Statistics of the field produced by squeezing vacuum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezedFieldParams {
    pub n: f64,
    pub c: Complex64,
    pub s: f64,
    pub theta: f64,
}

impl SqueezedFieldParams {
    /// `|n(n+1) − |c|²|`
    pub fn constraint_residual(&self) -> f64 {
        (self.n * (self.n + 1.0) - self.c.norm_sqr()).abs()
    }
}

/// `n = ½cosh 2s − ½`, `c = ½e^{iθ} sinh 2s`.
pub fn squeezed_field_params(s: f64, theta: f64) -> SqueezedFieldParams {
    // sinh² s is the same quantity without cancellation near s = 0.
    let n = s.sinh().powi(2);
    let c = Complex64::from_polar(0.5 * (2.0 * s).sinh(), theta);
    SqueezedFieldParams { n, c, s, theta }
}

pub(crate) fn wrap_angle(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y <= -PI {
        y += 2.0 * PI;
    } else if y > PI {
        y -= 2.0 * PI;
    }
    y
}
