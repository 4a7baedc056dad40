//! Decomposition of a passive `m × m` unitary into beam splitters on
//! adjacent channels and output phase shifters.

use num_complex::Complex64;

use super::devices::{BeamSplitterParams, PhaseShifterParams};
use crate::error::{Error, Result};
use crate::linalg::{identity_c, unitarity_residual, CMat};
use crate::slh::DEFAULT_TOL;

const SKIP_TOL: f64 = 1e-14;

/// One mesh element, listed in the order the field meets it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeshElement {
    /// Acts on channels `(upper, upper + 1)` as `[b₀', b₁'] = B[b₀, b₁]`.
    BeamSplitter {
        upper: usize,
        params: BeamSplitterParams,
    },
    PhaseShifter {
        channel: usize,
        params: PhaseShifterParams,
    },
}

/// The unitary implemented by a mesh on `m` channels.
pub fn mesh_matrix(m: usize, mesh: &[MeshElement]) -> CMat {
    let mut u = identity_c(m);
    for el in mesh {
        match el {
            MeshElement::BeamSplitter { upper, params } => {
                let b = params.matrix();
                let rows = u.rows(*upper, 2).clone_owned();
                u.rows_mut(*upper, 2).copy_from(&(b * rows));
            }
            MeshElement::PhaseShifter { channel, params } => {
                let g = params.gain();
                let mut row = u.row_mut(*channel);
                row *= g;
            }
        }
    }
    u
}

pub fn passive_unitary_to_mesh(s: &CMat) -> Result<Vec<MeshElement>> {
    let residual = unitarity_residual(s);
    if !(residual <= DEFAULT_TOL) {
        return Err(Error::NotUnitary { residual });
    }
    let m = s.nrows();
    let mut work = s.clone();
    // Rotations G applied on the left, in elimination order.
    let mut rotations: Vec<(usize, CMat)> = Vec::new();
    for col in 0..m {
        for row in (col + 1..m).rev() {
            let x = work[(row - 1, col)];
            let y = work[(row, col)];
            if y.norm() <= SKIP_TOL {
                continue;
            }
            let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let g = CMat::from_row_slice(2, 2, &[x.conj(), y.conj(), -y, x]) / Complex64::from(rho);
            let rows = work.rows(row - 1, 2).clone_owned();
            work.rows_mut(row - 1, 2).copy_from(&(&g * rows));
            rotations.push((row - 1, g));
        }
    }
    // S = G₁† ⋯ G_N† D: the field meets D first.
    let mut mesh = Vec::new();
    for ch in 0..m {
        let theta = work[(ch, ch)].arg();
        if theta.abs() > SKIP_TOL {
            mesh.push(MeshElement::PhaseShifter {
                channel: ch,
                params: PhaseShifterParams { theta },
            });
        }
    }
    for (upper, g) in rotations.into_iter().rev() {
        let params = BeamSplitterParams::from_unitary(&g.adjoint())?;
        mesh.push(MeshElement::BeamSplitter { upper, params });
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_c};
    use crate::random::random_unitary;
    use crate::testing::seeded;

    #[test]
    fn identity_gives_empty_mesh() {
        assert!(passive_unitary_to_mesh(&identity_c(3)).unwrap().is_empty());
    }

    #[test]
    fn single_phase() {
        let s = CMat::from_element(1, 1, Complex64::from_polar(1.0, 0.7));
        let mesh = passive_unitary_to_mesh(&s).unwrap();
        assert_eq!(mesh.len(), 1);
        match mesh[0] {
            MeshElement::PhaseShifter { channel, params } => {
                assert_eq!(channel, 0);
                assert!((params.theta - 0.7).abs() < 1e-15);
            }
            _ => panic!("expected a phase shifter"),
        }
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = seeded(31);
        for m in 1..=5 {
            for _ in 0..20 {
                let s = random_unitary(&mut rng, m);
                let mesh = passive_unitary_to_mesh(&s).unwrap();
                assert!(max_abs_c(&(mesh_matrix(m, &mesh) - &s)) < 1e-12);
                assert!(mesh.len() <= m * (m - 1) / 2 + m);
            }
        }
    }

    #[test]
    fn swap_is_one_beam_splitter() {
        let s = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let mesh = passive_unitary_to_mesh(&s).unwrap();
        assert!(max_abs_c(&(mesh_matrix(2, &mesh) - &s)) < 1e-14);
        let splitters = mesh
            .iter()
            .filter(|e| matches!(e, MeshElement::BeamSplitter { .. }))
            .count();
        assert_eq!(splitters, 1);
    }

    #[test]
    fn non_unitary_rejected() {
        let s = CMat::from_element(1, 1, c(2.0, 0.0));
        assert!(matches!(
            passive_unitary_to_mesh(&s),
            Err(Error::NotUnitary { .. })
        ));
    }
}
