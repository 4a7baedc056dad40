//! Beam-splitter mesh and three-factor quasi-unitary decompositions of
//! random static networks.

use lqsynth::linalg::max_abs_c;
use lqsynth::optics::{
    mesh_matrix, passive_unitary_to_mesh, quasiunitary_decompose, QuasiUnitaryDecomposition,
};
use lqsynth::random::random_unitary;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lqsynth::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_unitary(&mut rng, 4);
    let mesh = passive_unitary_to_mesh(&u)?;
    println!(
        "mesh with {} elements, reconstruction error {:.1e}",
        mesh.len(),
        max_abs_c(&(mesh_matrix(4, &mesh) - &u))
    );

    let q = QuasiUnitaryDecomposition {
        u1: random_unitary(&mut rng, 3),
        d: DVector::from_vec(vec![0.2, 0.7, 1.1]),
        u3: random_unitary(&mut rng, 3),
    }
    .reconstruct();
    let dec = quasiunitary_decompose(&q)?;
    let d: Vec<String> = dec.d.iter().map(|x| format!("{x:.6}")).collect();
    println!("squeeze parameters [{}]", d.join(", "));
    println!(
        "reconstruction error {:.1e}",
        max_abs_c(&(dec.reconstruct() - &q))
    );
    Ok(())
}
