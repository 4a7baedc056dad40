//! Mode-operator expressions in terms of quadratures. With `a = (q + ip)/2`,
//! a linear form `αa + βa*` becomes a row of `K` and a Hermitian quadratic
//! form in `a, a*` becomes `½xᵀRx` up to a scalar.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMat, RMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    /// `a_j`
    Lower(usize),
    /// `a_j*`
    Raise(usize),
}

/// Quadrature coefficients of a ladder operator as a `1 × 2n` row.
pub fn ladder_row(n: usize, op: Ladder) -> CMat {
    let mut row = CMat::zeros(1, 2 * n);
    let (j, sign) = match op {
        Ladder::Lower(j) => (j, 1.0),
        Ladder::Raise(j) => (j, -1.0),
    };
    assert!(j < n, "mode {j} out of range for {n} modes");
    row[(0, 2 * j)] = Complex64::new(0.5, 0.0);
    row[(0, 2 * j + 1)] = Complex64::new(0.0, 0.5 * sign);
    row
}

/// Row of `K` for `Σ coef · op`.
pub fn linear_row(n: usize, terms: &[(Complex64, Ladder)]) -> CMat {
    terms.iter().fold(CMat::zeros(1, 2 * n), |acc, (coef, op)| {
        acc + ladder_row(n, *op) * *coef
    })
}

/// `R` with `½xᵀRx = Σ coef · u v` up to an additive constant. The sum must
/// be Hermitian; an imaginary symmetric part above `tol` is rejected.
pub fn hamiltonian_matrix(
    n: usize,
    terms: &[(Complex64, Ladder, Ladder)],
    tol: f64,
) -> Result<RMat> {
    let mut w = CMat::zeros(2 * n, 2 * n);
    for (coef, u, v) in terms {
        w += ladder_row(n, *u).transpose() * ladder_row(n, *v) * *coef;
    }
    let sym = (&w + w.transpose()) * Complex64::new(0.5, 0.0);
    let imag = sym.map(|z| z.im);
    let scale = 1.0f64.max(max_abs(&sym.map(|z| z.re)));
    if max_abs(&imag) > tol * scale {
        return Err(Error::InvalidParameter(format!(
            "quadratic form is not Hermitian (imaginary residue {:.3e})",
            max_abs(&imag)
        )));
    }
    Ok(sym.map(|z| 2.0 * z.re))
}
