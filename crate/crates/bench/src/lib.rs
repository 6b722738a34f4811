//! Fixed inputs shared by the benchmarks.

use quasiortho::algebra::{build, AlgebraSpec, Tolerances, UnitalStarAlgebra};
use quasiortho::linalg::{gaussian_matrix, haar_unitary, seeded_rng};
use quasiortho::paperlab::TrialConfig;
use quasiortho::{CMatrix, Result};

/// `M_2 ⊕ M_2` against a Haar-rotated copy of `Δ_4`.
pub fn generic_pair(seed: u64) -> Result<(UnitalStarAlgebra, UnitalStarAlgebra)> {
    let a = build(&AlgebraSpec::blocks(vec![2, 2]))?;
    let b = build(&AlgebraSpec::blocks(vec![1, 1, 1, 1]))?;
    let b = b.conjugate_by(&haar_unitary(4, seed), &Tolerances::default())?;
    Ok((a, b))
}

/// Block algebra of dimension `n` with blocks of size at most 2, Haar-rotated.
pub fn rotated_blocks(n: usize, seed: u64) -> Result<UnitalStarAlgebra> {
    let mut blocks = vec![2; n / 2];
    if n % 2 == 1 {
        blocks.push(1);
    }
    build(&AlgebraSpec::blocks(blocks))?.conjugate_by(&haar_unitary(n, seed), &Tolerances::default())
}

/// Random Hermitian `n x n` matrix (GUE up to scale).
pub fn hermitian(n: usize, seed: u64) -> CMatrix {
    gaussian_matrix(n, &mut seeded_rng(seed)).hermitian_part()
}

pub fn trial_config(count: usize) -> TrialConfig {
    TrialConfig {
        n: 4,
        spec_a: AlgebraSpec::blocks(vec![2, 2]),
        spec_b: AlgebraSpec::blocks(vec![1, 1, 2]),
        seed: 1,
        count,
        tol: 1e-8,
    }
}
