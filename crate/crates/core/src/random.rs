//! Seeded random instances: Haar-like unitaries, valid oscillators and
//! moment probes. Used by the CLI, the examples and the test suites.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{CMat, RMat};
use crate::quadratic::{hamiltonian_matrix, Ladder};
use crate::slh::OscillatorParams;

/// Standard normal sample by the Box-Muller transform.
pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_real<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, scale: f64) -> RMat {
    DMatrix::from_fn(rows, cols, |_, _| scale * normal(rng))
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, scale: f64) -> CMat {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng) * scale)
}

/// Haar-distributed unitary from the QR factorization of a complex
/// Gaussian matrix, with the phases of `diag(R)` absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, m: usize) -> CMat {
    let z = random_complex(rng, m, m, 1.0);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> RMat {
    let a = random_real(rng, n, n, scale);
    (&a + a.transpose()) * 0.5
}

/// A valid oscillator with `n` degrees of freedom, `m` channels, a random
/// unitary `S` and entries of `K`, `R` of typical size `scale`.
pub fn random_oscillator<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    scale: f64,
) -> OscillatorParams {
    OscillatorParams {
        s: random_unitary(rng, m),
        k: random_complex(rng, m, 2 * n, scale),
        r: random_symmetric(rng, 2 * n, scale),
    }
}

/// A valid oscillator whose channels couple only to annihilation operators
/// and whose Hamiltonian conserves excitation number, so the drift never
/// amplifies.
pub fn random_dissipative_oscillator<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    scale: f64,
) -> OscillatorParams {
    let g = random_complex(rng, m, n, scale);
    let mut k = CMat::zeros(m, 2 * n);
    for i in 0..m {
        for j in 0..n {
            k[(i, 2 * j)] = g[(i, j)] * 0.5;
            k[(i, 2 * j + 1)] = g[(i, j)] * Complex64::new(0.0, 0.5);
        }
    }
    let h = random_complex(rng, n, n, scale);
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let mut terms = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            terms.push((h[(i, j)], Ladder::Raise(i), Ladder::Lower(j)));
        }
    }
    OscillatorParams {
        s: random_unitary(rng, m),
        k,
        r: hamiltonian_matrix(n, &terms, 1e-12).expect("Hermitian by construction"),
    }
}

/// A random initial mean and a random positive definite second-moment
/// matrix above the vacuum level.
pub fn random_probe<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (DVector<f64>, RMat) {
    let mean = DVector::from_fn(2 * n, |_, _| normal(rng));
    let a = random_real(rng, 2 * n, 2 * n, 0.5);
    let second = RMat::identity(2 * n, 2 * n) + &a * a.transpose();
    (mean, second)
}
