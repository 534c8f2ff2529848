//! Workloads shared by the criterion benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcc_core::{build_cosphere_diagram, moment_cone, IntMatrix, MomentCone};

/// Cone of the unit cosphere bundle of `L³_p(q)`.
pub fn cosphere_cone(p: u64, q: u64) -> MomentCone {
    moment_cone(&build_cosphere_diagram(p, q).expect("valid (p, q)"))
}

/// Seeded dense `rows × cols` matrix with entries in `-range..=range`.
pub fn random_matrix(rows: usize, cols: usize, range: i64, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-range..=range)).collect())
        .collect();
    let rows: Vec<&[i64]> = data.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64_rows(&rows).expect("rectangular")
}
