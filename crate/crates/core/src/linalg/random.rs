use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::matrix::{CMatrix, CScalar};

/// Generator used by every randomized routine. Counter-based, so a seed fixes the
/// whole stream on every platform.
pub type TrialRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> TrialRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// `n x n` matrix of i.i.d. standard complex Gaussians (`E|z|^2 = 1`).
pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        CScalar::new(re * s, im * s)
    })
}

/// Haar-distributed unitary, deterministic in `seed`.
pub fn haar_unitary(n: usize, seed: u64) -> CMatrix {
    haar_unitary_with(n, &mut seeded_rng(seed))
}

/// Haar-distributed unitary drawn from `rng`.
///
/// QR of a complex Gaussian matrix. The Q factor comes from two-pass modified
/// Gram–Schmidt on the columns, which makes every diagonal entry of R real and
/// positive; that normalization is what makes Q exactly Haar.
pub fn haar_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    assert!(n >= 1, "haar_unitary needs n >= 1");
    let z = gaussian_matrix(n, rng);
    let mut cols: Vec<Vec<CScalar>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = z.column(j);
        for _ in 0..2 {
            for q in &cols {
                let c: CScalar = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let nrm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= nrm;
        }
        cols.push(v);
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}
