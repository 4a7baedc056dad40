//! Bloch-Messiah factorization of a quasi-unitary field transformation
//! `Q = [[Q₁, Q₂], [Q₂^#, Q₁^#]]` into
//! `blockdiag(U₁, U₁^#) · [[cosh D, sinh D], [sinh D, cosh D]] · blockdiag(U₃, U₃^#)`.

use nalgebra::DVector;
use num_complex::Complex64;

use super::devices::quasi_unitarity_residual;
use crate::error::{Error, Result};
use crate::linalg::{conj, max_abs_c, CMat, RMat};

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiUnitaryDecomposition {
    pub u1: CMat,
    /// Nonnegative squeezing parameters.
    pub d: DVector<f64>,
    pub u3: CMat,
}

impl QuasiUnitaryDecomposition {
    pub fn squeeze_matrix(&self) -> CMat {
        let m = self.d.len();
        let mut out = CMat::zeros(2 * m, 2 * m);
        for (j, &dj) in self.d.iter().enumerate() {
            out[(j, j)] = dj.cosh().into();
            out[(m + j, m + j)] = dj.cosh().into();
            out[(j, m + j)] = dj.sinh().into();
            out[(m + j, j)] = dj.sinh().into();
        }
        out
    }

    pub fn reconstruct(&self) -> CMat {
        passive_block(&self.u1) * self.squeeze_matrix() * passive_block(&self.u3)
    }
}

/// `blockdiag(U, U^#)`.
pub fn passive_block(u: &CMat) -> CMat {
    crate::linalg::block_diag(u, &conj(u))
}

/// Checks the block-conjugate structure and `QGQ† = G`, with the tolerance
/// scaled by `max(1, ‖Q‖²)`.
pub fn check_quasi_unitary(q: &CMat, tol: f64) -> Result<()> {
    let (r, cc) = q.shape();
    if r != cc || r % 2 != 0 || r == 0 {
        return Err(Error::NotQuasiUnitary(format!("shape {r}x{cc}")));
    }
    let m = r / 2;
    let scale = max_abs_c(q).powi(2).max(1.0);
    let q1 = q.view((0, 0), (m, m));
    let q2 = q.view((0, m), (m, m));
    let structure = max_abs_c(&(q.view((m, m), (m, m)) - conj(&q1.clone_owned()))).max(max_abs_c(
        &(q.view((m, 0), (m, m)) - conj(&q2.clone_owned())),
    ));
    if structure > tol * scale.sqrt() {
        return Err(Error::NotQuasiUnitary(format!(
            "lower blocks are not conjugates of the upper blocks (residual {structure:.3e})"
        )));
    }
    let residual = quasi_unitarity_residual(q);
    if residual > tol * scale {
        return Err(Error::NotQuasiUnitary(format!(
            "QGQ† − G residual {residual:.3e}"
        )));
    }
    Ok(())
}

/// `T = Q₁⁻¹Q₂ = U₃† tanh D Ū₃` is complex symmetric; its Takagi vectors are
/// read off the eigenvectors of the real symmetric matrix
/// `[[Re T, Im T], [Im T, −Re T]]`, whose spectrum is `±tanh dⱼ`.
pub fn quasiunitary_decompose(q: &CMat) -> Result<QuasiUnitaryDecomposition> {
    check_quasi_unitary(q, 1e-9)?;
    let m = q.nrows() / 2;
    let q1 = q.view((0, 0), (m, m)).clone_owned();
    let q2 = q.view((0, m), (m, m)).clone_owned();

    let t = q1
        .clone()
        .lu()
        .solve(&q2)
        .ok_or_else(|| Error::NotQuasiUnitary("upper-left block is singular".into()))?;
    let t = (&t + t.transpose()) * Complex64::new(0.5, 0.0);
    let (re, im) = (t.map(|z| z.re), t.map(|z| z.im));
    let mut big = RMat::zeros(2 * m, 2 * m);
    big.view_mut((0, 0), (m, m)).copy_from(&re);
    big.view_mut((0, m), (m, m)).copy_from(&im);
    big.view_mut((m, 0), (m, m)).copy_from(&im);
    big.view_mut((m, m), (m, m)).copy_from(&(-&re));
    let eig = big.symmetric_eigen();

    let mut order: Vec<usize> = (0..2 * m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut cols = Vec::with_capacity(m);
    let mut tanh_d = Vec::with_capacity(m);
    for &j in order.iter().take(m) {
        let tj = eig.eigenvalues[j];
        if tj <= 1e-12 {
            break;
        }
        let e = eig.eigenvectors.column(j);
        cols.push(CMat::from_fn(m, 1, |i, _| Complex64::new(e[i], e[m + i])));
        tanh_d.push(tj.min(1.0 - f64::EPSILON));
    }
    let k = cols.len();
    let mut v = CMat::zeros(m, m);
    for (j, col) in cols.iter().enumerate() {
        v.set_column(j, &col.column(0));
    }
    if k < m {
        // Unsqueezed directions: any orthonormal basis of the complement.
        let vk = v.columns(0, k).clone_owned();
        let proj = CMat::identity(m, m) - &vk * vk.adjoint();
        let pe = proj.symmetric_eigen();
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&a, &b| pe.eigenvalues[b].total_cmp(&pe.eigenvalues[a]));
        for (j, &i) in idx.iter().take(m - k).enumerate() {
            v.set_column(k + j, &pe.eigenvectors.column(i));
        }
    }
    let v = nearest_unitary(&v);
    let d = DVector::from_fn(m, |j, _| if j < k { tanh_d[j].atanh() } else { 0.0 });

    let cosh_inv = CMat::from_diagonal(&d.map(|x| Complex64::from(1.0 / x.cosh())));
    let u1 = nearest_unitary(&(&q1 * &v * cosh_inv));
    let decomposition = QuasiUnitaryDecomposition {
        u1,
        d,
        u3: v.adjoint(),
    };
    let residual = max_abs_c(&(decomposition.reconstruct() - q));
    let scale = max_abs_c(q).max(1.0);
    if residual > 1e-8 * scale {
        return Err(Error::Consistency(format!(
            "quasi-unitary factorization residual {residual:.3e}"
        )));
    }
    Ok(decomposition)
}

/// Unitary polar factor `XY` of `A = XΣY`.
fn nearest_unitary(a: &CMat) -> CMat {
    let svd = a.clone().svd(true, true);
    svd.u.expect("requested U") * svd.v_t.expect("requested Vᵀ")
}
