//! Dense matrix aliases and the handful of helpers the rest of the crate
//! shares. Everything is double precision; residuals use the entrywise
//! maximum-modulus norm.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Entrywise maximum modulus.
pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

/// Elementwise conjugate (`A^#`).
pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

pub fn identity_c(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `max(‖S†S − I‖, ‖SS† − I‖)`; zero for an empty matrix.
pub fn unitarity_residual(s: &CMat) -> f64 {
    if s.nrows() != s.ncols() {
        return f64::INFINITY;
    }
    let n = s.nrows();
    let id = identity_c(n);
    let a = max_abs_c(&(s.adjoint() * s - &id));
    let b = max_abs_c(&(s * s.adjoint() - &id));
    a.max(b)
}

pub fn symmetry_residual(r: &RMat) -> f64 {
    if r.nrows() != r.ncols() {
        return f64::INFINITY;
    }
    max_abs(&(r - r.transpose()))
}

pub fn symmetrize(r: &RMat) -> RMat {
    (r + r.transpose()) * 0.5
}

pub fn block_diag<T: nalgebra::ComplexField>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = DMatrix::<T>::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

pub fn hstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitarity_of_diag_1_2() {
        let s = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        assert!((unitarity_residual(&s) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn block_diag_shapes() {
        let a = RMat::from_element(1, 2, 1.0);
        let b = RMat::from_element(2, 1, 2.0);
        let d = block_diag(&a, &b);
        assert_eq!(d.shape(), (3, 3));
        assert_eq!(d[(0, 1)], 1.0);
        assert_eq!(d[(2, 2)], 2.0);
        assert_eq!(d[(0, 2)], 0.0);
    }
}
