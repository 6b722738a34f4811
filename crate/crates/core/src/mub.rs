//! Orthonormal basis families and mutual unbiasedness.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{build, AlgebraSpec, UnitalStarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{orthonormality_defect, CScalar, CVector};
use crate::privacy;

/// Orthonormality tolerance for every basis in a family.
pub const BASIS_TOL: f64 = 1e-10;

/// A list of orthonormal bases of `C^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFamily {
    pub n: usize,
    pub bases: Vec<Vec<CVector>>,
}

impl BasisFamily {
    /// Builds a family and checks it with [`BasisFamily::check`].
    pub fn new(n: usize, bases: Vec<Vec<CVector>>) -> Result<Self> {
        let family = Self { n, bases };
        family.check()?;
        Ok(family)
    }

    /// Shape errors come back as `Dimension`, orthonormality failures as `Basis`.
    pub fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::dim("basis vectors need n >= 1"));
        }
        for (k, basis) in self.bases.iter().enumerate() {
            if basis.len() != self.n || basis.iter().any(|v| v.dim() != self.n) {
                return Err(Error::dim(format!("basis {k} must hold {0} vectors of length {0}", self.n)));
            }
        }
        for (k, basis) in self.bases.iter().enumerate() {
            let defect = orthonormality_defect(basis);
            if defect > BASIS_TOL {
                return Err(Error::basis(format!("basis {k} is not orthonormal"), defect));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    fn require_pairs(&self) -> Result<()> {
        if self.bases.len() < 2 {
            return Err(Error::Input(format!("need at least 2 bases, got {}", self.bases.len())));
        }
        self.check()
    }
}

/// Canonical unit vectors.
pub fn standard_basis(n: usize) -> Vec<CVector> {
    (0..n).map(|k| CVector::basis(n, k)).collect()
}

/// Vector `j` has entries `ω^{jk}/√n`, `ω = e^{2πi/n}`.
pub fn fourier_basis(n: usize) -> Vec<CVector> {
    let amp = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|j| {
            let entries = (0..n).map(|k| CScalar::from_polar(amp, 2.0 * PI * ((j * k) % n) as f64 / n as f64));
            CVector::new(entries.collect()).expect("finite entries")
        })
        .collect()
}

/// Maximal abelian subalgebra spanned by the rank-one projectors of `basis`.
pub fn masa_of(basis: &[CVector]) -> Result<UnitalStarAlgebra> {
    let n = basis.first().ok_or_else(|| Error::EmptyInput("masa_of needs a basis".into()))?.dim();
    build(&AlgebraSpec::masa(n, basis.to_vec()))
}

fn overlaps(family: &BasisFamily) -> impl Iterator<Item = f64> + '_ {
    let m = family.bases.len();
    (0..m).flat_map(move |k| {
        (k + 1..m).flat_map(move |l| {
            family.bases[k]
                .iter()
                .flat_map(move |u| family.bases[l].iter().map(move |v| u.inner(v).norm_sqr()))
        })
    })
}

/// Smallest `ε` with `|⟨ψ, φ⟩|² ≤ (1 + ε)/n` for all vectors from distinct bases:
/// `n · max |⟨ψ, φ⟩|² − 1`.
pub fn unbiasedness_epsilon(family: &BasisFamily) -> Result<f64> {
    family.require_pairs()?;
    Ok(family.n as f64 * overlaps(family).fold(0.0, f64::max) - 1.0)
}

/// Mean of `|n |⟨ψ, φ⟩|² − 1|` over vectors from distinct bases. A secondary
/// statistic; [`unbiasedness_epsilon`] is the uniform bound.
pub fn unbiasedness_epsilon_mean(family: &BasisFamily) -> Result<f64> {
    family.require_pairs()?;
    let n = family.n as f64;
    let (sum, count) = overlaps(family).fold((0.0, 0usize), |(s, c), x| (s + (n * x - 1.0).abs(), c + 1));
    Ok(sum / count as f64)
}

/// `Q` between the MASAs of every pair of bases. Symmetric, with `n` on the diagonal.
pub fn pairwise_q(family: &BasisFamily) -> Result<Vec<Vec<f64>>> {
    family.require_pairs()?;
    let masas: Vec<UnitalStarAlgebra> = family.bases.iter().map(|b| masa_of(b)).collect::<Result<_>>()?;
    let m = masas.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|k| (k..m).map(move |l| (k, l))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(k, l)| privacy::q(&masas[k], &masas[l]))
        .collect::<Result<_>>()?;
    let mut out = vec![vec![0.0; m]; m];
    for (&(k, l), &v) in pairs.iter().zip(&values) {
        out[k][l] = v;
        out[l][k] = v;
    }
    Ok(out)
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Complete family of `p + 1` mutually unbiased bases in prime dimension `p`.
///
/// `p = 2`: eigenbases of Z, X and Y. Odd `p`: the standard basis plus, for each
/// `a`, the vectors `ω^{a k² + b k}/√p` (`b = 0..p`), the eigenbases of `X Z^a`.
pub fn mub_family_prime(p: usize) -> Result<BasisFamily> {
    if !is_prime(p) {
        return Err(Error::Input(format!("{p} is not prime")));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bases = if p == 2 {
        let vec2 = |a: CScalar, b: CScalar| CVector::new(vec![a, b]).expect("finite");
        let one = CScalar::new(s, 0.0);
        vec![
            standard_basis(2),
            vec![vec2(one, one), vec2(one, -one)],
            vec![vec2(one, CScalar::new(0.0, s)), vec2(one, CScalar::new(0.0, -s))],
        ]
    } else {
        let amp = 1.0 / (p as f64).sqrt();
        let mut bases = vec![standard_basis(p)];
        for a in 0..p {
            let basis = (0..p)
                .map(|b| {
                    let entries = (0..p).map(|k| {
                        let phase = (a * k * k + b * k) % p;
                        CScalar::from_polar(amp, 2.0 * PI * phase as f64 / p as f64)
                    });
                    CVector::new(entries.collect()).expect("finite")
                })
                .collect();
            bases.push(basis);
        }
        bases
    };
    BasisFamily::new(p, bases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm, haar_unitary, span_residual, CMatrix};

    fn family(n: usize, bases: Vec<Vec<CVector>>) -> BasisFamily {
        BasisFamily::new(n, bases).unwrap()
    }

    fn rotate(basis: &[CVector], u: &CMatrix) -> Vec<CVector> {
        basis.iter().map(|v| v.apply(u)).collect()
    }

    /// Test-only oracle: every cross-basis inner product, maximized by brute force.
    fn brute_force_epsilon(f: &BasisFamily) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..f.bases.len() {
            for l in 0..f.bases.len() {
                if k == l {
                    continue;
                }
                for u in &f.bases[k] {
                    for v in &f.bases[l] {
                        let ip: CScalar = u.as_slice().iter().zip(v.as_slice()).map(|(a, b)| a.conj() * b).sum();
                        worst = worst.max(ip.norm_sqr());
                    }
                }
            }
        }
        f.n as f64 * worst - 1.0
    }

    #[test]
    fn fourier_examples() {
        let f = fourier_basis(2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((f[0].as_slice()[0] - CScalar::new(s, 0.0)).norm() < 1e-15);
        assert!((f[1].as_slice()[1] - CScalar::new(-s, 0.0)).norm() < 1e-15);
        assert!(orthonormality_defect(&fourier_basis(3)) < 1e-12);
        for n in 2..6 {
            for e in standard_basis(n) {
                for f in fourier_basis(n) {
                    assert!((e.inner(&f).norm_sqr() - 1.0 / n as f64).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn masa_examples() {
        let d = masa_of(&standard_basis(4)).unwrap();
        assert_eq!(d.dim(), 4);
        for n in 1..6 {
            assert_eq!(masa_of(&fourier_basis(n)).unwrap().dim(), n);
        }
        // Projectors (I ± σx)/2 span {I, σx}.
        let m = masa_of(&fourier_basis(2)).unwrap();
        let sx = CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(span_residual(&sx, m.basis()) < 1e-14);
        assert!(span_residual(&CMatrix::identity(2), m.basis()) < 1e-14);
        let bad = vec![CVector::basis(2, 0), CVector::basis(2, 0)];
        assert!(matches!(masa_of(&bad), Err(Error::Basis { .. })));
    }

    #[test]
    fn epsilon_examples() {
        let f = family(3, vec![standard_basis(3), fourier_basis(3)]);
        assert!(unbiasedness_epsilon(&f).unwrap().abs() < 1e-10);
        for n in 2..5 {
            let f = family(n, vec![standard_basis(n), standard_basis(n)]);
            assert!((unbiasedness_epsilon(&f).unwrap() - (n as f64 - 1.0)).abs() < 1e-14);
        }
        let one = family(3, vec![standard_basis(3)]);
        assert!(matches!(unbiasedness_epsilon(&one), Err(Error::Input(_))));
        assert!(matches!(pairwise_q(&one), Err(Error::Input(_))));
    }

    #[test]
    fn epsilon_of_perturbed_family_matches_brute_force() {
        for n in 2..6 {
            let mut diag = vec![0.0; n];
            diag[0] = 0.05;
            diag[1] = -0.05;
            let h = CMatrix::from_fn(n, n, |i, j| {
                let base = if i == j { diag[i] } else { 0.01 * (i + j) as f64 };
                CScalar::new(base, 0.0)
            });
            let u = expm(&h.scale(CScalar::new(0.0, 1.0))).unwrap();
            let f = family(n, vec![standard_basis(n), rotate(&fourier_basis(n), &u)]);
            let eps = unbiasedness_epsilon(&f).unwrap();
            assert!(eps > 1e-6);
            assert!((eps - brute_force_epsilon(&f)).abs() < 1e-12);
            assert!(unbiasedness_epsilon_mean(&f).unwrap() <= eps + 1e-12);
            let q = pairwise_q(&f).unwrap();
            assert!(q[0][1] > 1.0 && q[0][1] <= n as f64);
        }
    }

    #[test]
    fn epsilon_is_unitarily_invariant() {
        let f = mub_family_prime(3).unwrap();
        let g = family(3, vec![standard_basis(3), fourier_basis(3), rotate(&standard_basis(3), &haar_unitary(3, 2))]);
        for (seed, fam) in [(11u64, f), (12, g)] {
            let u = haar_unitary(3, seed);
            let rotated = family(3, fam.bases.iter().map(|b| rotate(b, &u)).collect());
            let a = unbiasedness_epsilon(&fam).unwrap();
            let b = unbiasedness_epsilon(&rotated).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn pairwise_q_examples() {
        let f = family(4, vec![standard_basis(4), fourier_basis(4)]);
        let q = pairwise_q(&f).unwrap();
        let expected = [[4.0, 1.0], [1.0, 4.0]];
        for k in 0..2 {
            for l in 0..2 {
                assert!((q[k][l] - expected[k][l]).abs() < 1e-9);
            }
        }
        let f = family(3, vec![standard_basis(3), standard_basis(3)]);
        for row in pairwise_q(&f).unwrap() {
            for v in row {
                assert!((v - 3.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn unbiased_iff_quasiorthogonal() {
        for n in 2..6 {
            let pairs = [
                (standard_basis(n), fourier_basis(n), true),
                (standard_basis(n), rotate(&fourier_basis(n), &haar_unitary(n, n as u64)), false),
            ];
            for (a, b, unbiased) in pairs {
                let f = family(n, vec![a, b]);
                let eps = unbiasedness_epsilon(&f).unwrap();
                let q = pairwise_q(&f).unwrap()[0][1];
                assert_eq!(eps <= 1e-9, unbiased);
                assert_eq!((q - 1.0).abs() <= 1e-8, unbiased);
            }
        }
    }

    #[test]
    fn prime_families() {
        for p in [2, 3, 5, 7] {
            let f = mub_family_prime(p).unwrap();
            assert_eq!(f.len(), p + 1);
            assert!(unbiasedness_epsilon(&f).unwrap() <= 1e-9);
            let q = pairwise_q(&f).unwrap();
            for (k, row) in q.iter().enumerate() {
                for (l, v) in row.iter().enumerate() {
                    let target = if k == l { p as f64 } else { 1.0 };
                    assert!((v - target).abs() < 1e-8, "p={p} ({k},{l}) = {v}");
                }
            }
        }
        assert!(matches!(mub_family_prime(4), Err(Error::Input(_))));
        assert!(mub_family_prime(1).is_err());
        assert!(mub_family_prime(11).is_ok());
    }

    #[test]
    fn family_json() {
        let f: BasisFamily =
            serde_json::from_str(r#"{"n": 2, "bases": [[[[1,0],[0,0]], [[0,0],[1,0]]], [[[0,0],[1,0]], [[1,0],[0,0]]]]}"#)
                .unwrap();
        f.check().unwrap();
        assert!(serde_json::from_str::<BasisFamily>(r#"{"n": 2, "bases": [], "extra": 1}"#).is_err());
        let bad = BasisFamily { n: 2, bases: vec![vec![CVector::basis(2, 0), CVector::basis(2, 0)]] };
        assert!(matches!(bad.check(), Err(Error::Basis { .. })));
        let short = BasisFamily { n: 2, bases: vec![vec![CVector::basis(2, 0)]] };
        assert!(matches!(short.check(), Err(Error::Dimension(_))));
    }
}
