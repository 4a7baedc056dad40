//! Fixtures shared by the unit tests.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{block_diag, c, identity_c, CMat, RMat};
use crate::slh::OscillatorParams;

pub use crate::random::random_oscillator;

pub fn cmat(rows: usize, cols: usize, entries: &[Complex64]) -> CMat {
    CMat::from_row_slice(rows, cols, entries)
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r1() -> RMat {
    RMat::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 3.0])
}

/// The two one-mode blocks of the two-mode reference system.
pub fn golden_blocks() -> (OscillatorParams, OscillatorParams) {
    let g1 = OscillatorParams {
        s: identity_c(1),
        k: cmat(1, 2, &[c(1.5, 0.0), c(0.0, 0.5)]),
        r: r1(),
    };
    let g2 = OscillatorParams {
        s: identity_c(1),
        k: cmat(1, 2, &[c(1.0, 0.0), c(0.0, 1.0)]),
        r: RMat::identity(2, 2),
    };
    (g1, g2)
}

/// Two-mode, one-channel reference system: `K = [3/2, i/2, 1, i]`,
/// `R = diag(R₁, I)`.
pub fn golden_system() -> OscillatorParams {
    OscillatorParams {
        s: identity_c(1),
        k: cmat(1, 4, &[c(1.5, 0.0), c(0.0, 0.5), c(1.0, 0.0), c(0.0, 1.0)]),
        r: block_diag(&r1(), &RMat::identity(2, 2)),
    }
}

/// Single-mode cavity `(1, [√γ/2, i√γ/2], 0)`.
pub fn cavity(gamma: f64) -> OscillatorParams {
    let h = gamma.sqrt() / 2.0;
    OscillatorParams {
        s: identity_c(1),
        k: cmat(1, 2, &[c(h, 0.0), c(0.0, h)]),
        r: RMat::zeros(2, 2),
    }
}
