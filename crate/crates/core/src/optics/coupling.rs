//! Parameters of the intracavity elements: the DPA realizing `R`, the two
//! schemes realizing a linear coupling `L = α̃a + β̃a*`, and the beam splitter
//! plus two-mode squeezer realizing a bilinear interaction `x_kᵀCx_l`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::devices::{
    squeezer_transformation, wrap_angle, BeamSplitterParams, SqueezerParams, TwoModeSqueezerParams,
};
use crate::error::{Error, Result};
use crate::linalg::{c, symmetry_residual, to_complex, CMat, RMat, I};

/// `L = α̃a + β̃a*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeCoupling {
    pub alpha_t: Complex64,
    pub beta_t: Complex64,
}

impl ModeCoupling {
    /// Quadrature coefficients `(α, β)` with `L = αq + βp`.
    pub fn to_quadrature(&self) -> [Complex64; 2] {
        [
            (self.alpha_t + self.beta_t) * 0.5,
            (self.beta_t - self.alpha_t) * (-0.5 * I),
        ]
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.alpha_t.norm() <= tol && self.beta_t.norm() <= tol
    }
}

/// `αq + βp = α̃a + β̃a*` with `q = a + a*`, `p = −i(a − a*)`.
pub fn quadrature_to_mode(k_row: [Complex64; 2]) -> ModeCoupling {
    let [alpha, beta] = k_row;
    ModeCoupling {
        alpha_t: alpha - I * beta,
        beta_t: alpha + I * beta,
    }
}

/// Degenerate parametric amplifier `H = Δa*a + (i/2)(εa*² − ε*a²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpaParams {
    pub delta: f64,
    pub epsilon: Complex64,
}

impl DpaParams {
    /// The quadrature Hamiltonian matrix realized by the amplifier.
    pub fn hamiltonian_matrix(&self) -> RMat {
        let (re, im) = (self.epsilon.re, self.epsilon.im);
        RMat::from_row_slice(
            2,
            2,
            &[
                0.5 * (self.delta - im),
                0.5 * re,
                0.5 * re,
                0.5 * (self.delta + im),
            ],
        )
    }

    pub fn has_crystal(&self) -> bool {
        self.epsilon != Complex64::new(0.0, 0.0)
    }
}

pub fn dpa_from_r(r: &RMat) -> Result<DpaParams> {
    if r.shape() != (2, 2) {
        return Err(Error::DimensionMismatch(format!(
            "DPA Hamiltonian must be 2x2, got {:?}",
            r.shape()
        )));
    }
    let residual = symmetry_residual(r);
    if residual > crate::slh::DEFAULT_TOL {
        return Err(Error::NotSymmetric { residual });
    }
    Ok(DpaParams {
        delta: r[(0, 0)] + r[(1, 1)],
        epsilon: c(r[(0, 1)] + r[(1, 0)], r[(1, 1)] - r[(0, 0)]),
    })
}

/// Auxiliary-cavity scheme: a two-mode squeezer (pump `eps1`) and a beam
/// splitter (`eps2 = 2Θe^{−iΦ}`) couple the mode to a heavily damped
/// auxiliary cavity with mirror coupling `gamma2`, behind a phase shifter
/// of `input_phase` on the incoming field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scheme1Params {
    pub gamma2: f64,
    pub eps1: Complex64,
    pub eps2: Complex64,
    pub bs_theta: f64,
    pub bs_phi: f64,
    pub input_phase: f64,
}

impl Scheme1Params {
    /// Coupling obtained after eliminating the auxiliary cavity,
    /// `L = (−ε₂*a + ε₁a*)/√γ₂`.
    pub fn effective_coupling(&self) -> ModeCoupling {
        let g = self.gamma2.sqrt();
        ModeCoupling {
            alpha_t: -self.eps2.conj() / g,
            beta_t: self.eps1 / g,
        }
    }

    pub fn beam_splitter(&self) -> BeamSplitterParams {
        BeamSplitterParams {
            theta: self.bs_theta,
            phi: self.bs_phi,
            psi: -self.bs_phi,
            xi: 0.0,
        }
    }

    pub fn two_mode_squeezer(&self) -> TwoModeSqueezerParams {
        TwoModeSqueezerParams { pump: self.eps1 }
    }
}

/// `25·max(|α̃|², |β̃|², 4)`: at least 100 and a hundred times the larger
/// squared coefficient above that.
pub fn default_gamma2(mc: &ModeCoupling) -> f64 {
    25.0 * mc.alpha_t.norm_sqr().max(mc.beta_t.norm_sqr()).max(4.0)
}

pub fn coupling_scheme1(mc: &ModeCoupling, gamma2: f64) -> Result<Scheme1Params> {
    if !(gamma2 > 0.0) || !gamma2.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "auxiliary mirror coupling must be positive, got {gamma2}"
        )));
    }
    let g = gamma2.sqrt();
    let eps1 = mc.beta_t * g;
    let eps2 = -mc.alpha_t.conj() * g;
    let (bs_theta, bs_phi) = if eps2.im.abs() <= 1e-12 * eps2.norm().max(1.0) {
        (eps2.re / 2.0, 0.0)
    } else {
        (eps2.norm() / 2.0, wrap_angle(-eps2.arg()))
    };
    Ok(Scheme1Params {
        gamma2,
        eps1,
        eps2,
        bs_theta,
        bs_phi,
        input_phase: PI,
    })
}

/// Squeezed-field scheme: the incoming field passes a squeezer `(s, θ)`,
/// couples to the mode through a mirror of coupling `gamma`, and is
/// unsqueezed by the inverse squeezer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scheme2Params {
    pub gamma: f64,
    pub s: f64,
    pub theta: f64,
}

impl Scheme2Params {
    pub fn input_squeezer(&self) -> SqueezerParams {
        SqueezerParams {
            s: self.s,
            theta: self.theta,
        }
    }

    pub fn output_squeezer(&self) -> SqueezerParams {
        self.input_squeezer().inverse()
    }

    /// `Q = [[α̃, −β̃], [−β̃*, α̃]]/√γ` applied by the input squeezer.
    pub fn field_transformation(&self) -> CMat {
        squeezer_transformation(self.s, self.theta).0
    }

    pub fn effective_coupling(&self) -> ModeCoupling {
        let g = self.gamma.sqrt();
        ModeCoupling {
            alpha_t: c(g * self.s.cosh(), 0.0),
            beta_t: -Complex64::from_polar(g * self.s.sinh(), self.theta),
        }
    }

    pub fn is_plain_mirror(&self) -> bool {
        self.s == 0.0
    }
}

pub fn coupling_scheme2(mc: &ModeCoupling) -> Result<Scheme2Params> {
    let a = mc.alpha_t;
    let b = mc.beta_t.norm();
    if a.im.abs() > 1e-12 * a.norm().max(1.0) || !(a.re > b) {
        return Err(Error::SchemeNotApplicable(format!(
            "squeezed-field coupling needs real α̃ > |β̃|, got α̃ = {a}, |β̃| = {b}"
        )));
    }
    let gamma = a.re * a.re - b * b;
    let ratio = (a.re / gamma.sqrt()).max(1.0);
    let theta = if b > 0.0 { mc.beta_t.arg() } else { 0.0 };
    Ok(Scheme2Params {
        gamma,
        s: -ratio.acosh(),
        theta,
    })
}

/// Realization of `x_kᵀ C x_l = ε₁a_k*a_l + ε₁*a_ka_l* + ε₂a_k*a_l* + ε₂*a_ka_l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectOptics {
    pub eps1: Complex64,
    pub eps2: Complex64,
    pub beam_splitter: BeamSplitterParams,
    pub two_mode_squeezer: TwoModeSqueezerParams,
}

impl DirectOptics {
    pub fn needs_beam_splitter(&self, tol: f64) -> bool {
        self.eps1.norm() > tol
    }

    pub fn needs_squeezer(&self, tol: f64) -> bool {
        self.eps2.norm() > tol
    }
}

/// The four ladder-operator coefficients of `x_kᵀ C x_l`, indexed
/// `[u][v]` with `u, v ∈ {a, a*}` for modes `k` and `l` respectively.
pub fn ladder_coefficients(ckl: &RMat) -> Result<[[Complex64; 2]; 2]> {
    if ckl.shape() != (2, 2) {
        return Err(Error::DimensionMismatch(format!(
            "coupling block must be 2x2, got {:?}",
            ckl.shape()
        )));
    }
    if !ckl.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidParameter(
            "coupling block has non-finite entries".into(),
        ));
    }
    // x = P (a, a*)ᵀ
    let p = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0)]);
    let n = p.transpose() * to_complex(ckl) * &p;
    Ok([[n[(0, 0)], n[(0, 1)]], [n[(1, 0)], n[(1, 1)]]])
}

pub fn direct_to_optics(ckl: &RMat) -> Result<DirectOptics> {
    let n = ladder_coefficients(ckl)?;
    let eps1 = n[1][0];
    let eps2 = n[1][1];
    let phi = if eps1.norm() > 0.0 {
        wrap_angle(-eps1.arg() + PI / 2.0)
    } else {
        0.0
    };
    Ok(DirectOptics {
        eps1,
        eps2,
        beam_splitter: BeamSplitterParams {
            theta: eps1.norm(),
            phi,
            psi: -phi,
            xi: 0.0,
        },
        two_mode_squeezer: TwoModeSqueezerParams {
            pump: -2.0 * I * eps2,
        },
    })
}

/// Complex-matrix form accepted for validation of inputs that may carry
/// imaginary parts.
pub fn direct_to_optics_complex(ckl: &CMat, tol: f64) -> Result<DirectOptics> {
    let im = ckl.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
    if im > tol {
        return Err(Error::InvalidParameter(format!(
            "coupling block has imaginary entries (residue {im:.3e})"
        )));
    }
    direct_to_optics(&ckl.map(|z| z.re))
}
