//! Dense complex linear algebra.
//!
//! Everything here works on [`CMatrix`], a row-major dense matrix. The row-major
//! layout doubles as the vectorization convention used by the superoperator code:
//! `vec(X)[i*n + j] = X_ij`, so the Hilbert–Schmidt inner product of two matrices
//! is the ordinary inner product of their storage.

mod eig;
mod expm;
mod matrix;
mod random;

pub use eig::{eig_hermitian, lu_solve, singular_values, spectral_norm, HermitianEigen};
pub use expm::expm;
pub use matrix::{orthonormality_defect, CMatrix, CScalar, CVector};
pub use random::{gaussian_matrix, haar_unitary, haar_unitary_with, seeded_rng, TrialRng};

use crate::error::{Error, Result};

/// Default relative rank tolerance for Gram–Schmidt.
pub const RANK_TOL: f64 = 1e-10;

/// Which tensor factor [`partial_trace`] removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Hilbert–Schmidt inner product `⟨a, b⟩ = Tr(b* a)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<CScalar> {
    if !a.is_square() || (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::dim(format!(
            "hs_inner needs equal square matrices, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(hs_inner_unchecked(a, b))
}

pub(crate) fn hs_inner_unchecked(a: &CMatrix, b: &CMatrix) -> CScalar {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| y.conj() * x).sum()
}

/// Kronecker product: entry `(i*rb + j, k*cb + l)` is `a_ik * b_jl` (zero-based).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (rb, cb) = (b.rows(), b.cols());
    CMatrix::from_fn(a.rows() * rb, a.cols() * cb, |r, c| a[(r / rb, c / cb)] * b[(r % rb, c % cb)])
}

/// Partial trace of an `(n1*n2) x (n1*n2)` matrix over one tensor factor.
pub fn partial_trace(m: &CMatrix, n1: usize, n2: usize, factor: Factor) -> Result<CMatrix> {
    let n = n1 * n2;
    if n == 0 || m.rows() != n || m.cols() != n {
        return Err(Error::dim(format!(
            "partial trace over {n1}x{n2} factors needs a {n}x{n} matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(match factor {
        Factor::First => CMatrix::from_fn(n2, n2, |j, l| (0..n1).map(|i| m[(i * n2 + j, i * n2 + l)]).sum()),
        Factor::Second => CMatrix::from_fn(n1, n1, |i, k| (0..n2).map(|j| m[(i * n2 + j, k * n2 + j)]).sum()),
    })
}

/// Row-major vectorization of a matrix.
pub fn vectorize(x: &CMatrix) -> Vec<CScalar> {
    x.as_slice().to_vec()
}

/// Inverse of [`vectorize`] for an `n x n` matrix.
pub fn unvectorize(v: &[CScalar], n: usize) -> Result<CMatrix> {
    CMatrix::from_vec(n, n, v.to_vec())
}

/// Modified Gram–Schmidt in the Hilbert–Schmidt inner product.
///
/// Each input is orthogonalized against the accepted outputs twice (the second pass
/// repairs cancellation); inputs whose remaining norm is below
/// `tol * max_input_norm` are dropped. The result is an orthonormal basis of the
/// span, in input order.
pub fn gram_schmidt(mats: &[CMatrix], tol: f64) -> Result<Vec<CMatrix>> {
    let first = mats.first().ok_or_else(|| Error::EmptyInput("gram_schmidt needs at least one matrix".into()))?;
    if !(tol > 0.0) {
        return Err(Error::Input("gram_schmidt tolerance must be positive".into()));
    }
    let shape = (first.rows(), first.cols());
    if !first.is_square() || mats.iter().any(|m| (m.rows(), m.cols()) != shape) {
        return Err(Error::dim("gram_schmidt needs square matrices of a common size"));
    }
    let scale = mats.iter().map(CMatrix::norm).fold(0.0, f64::max);
    let mut out = Vec::new();
    extend_orthonormal(&mut out, mats.iter().cloned(), tol * scale);
    Ok(out)
}

/// Appends to the orthonormal set `basis` whatever new directions `candidates`
/// contribute, using an absolute norm threshold. Returns how many were added.
pub(crate) fn extend_orthonormal(
    basis: &mut Vec<CMatrix>,
    candidates: impl IntoIterator<Item = CMatrix>,
    abs_tol: f64,
) -> usize {
    let before = basis.len();
    for mut x in candidates {
        for _ in 0..2 {
            for q in basis.iter() {
                let c = hs_inner_unchecked(&x, q);
                x.axpy(-c, q);
            }
        }
        let nrm = x.norm();
        if nrm > abs_tol && nrm > 0.0 {
            basis.push(x.scale_real(1.0 / nrm));
        }
    }
    basis.len() - before
}

/// `‖x − P x‖_HS` where `P` is the orthogonal projection onto the span of the
/// orthonormal set `onb`.
pub fn span_residual(x: &CMatrix, onb: &[CMatrix]) -> f64 {
    let mut r = x.clone();
    for q in onb {
        let c = hs_inner_unchecked(&r, q);
        r.axpy(-c, q);
    }
    r.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use matrix::{ONE, ZERO};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> CScalar {
        CScalar::new(re, im)
    }

    fn sigma_x() -> CMatrix {
        CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    #[test]
    fn hs_inner_examples() {
        let e11 = CMatrix::unit(2, 0, 0);
        assert_eq!(hs_inner(&e11, &e11).unwrap(), ONE);
        assert_eq!(hs_inner(&CMatrix::identity(2), &sigma_x()).unwrap(), ZERO);
        assert_eq!(hs_inner(&sigma_x(), &sigma_x()).unwrap(), c(2.0, 0.0));
        assert!(matches!(hs_inner(&e11, &CMatrix::identity(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn hs_inner_is_conjugate_symmetric() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, 1.0)], vec![c(-1.0, 0.5), c(3.0, 0.0)]]).unwrap();
        let b = CMatrix::from_rows(&[vec![c(0.0, 1.0), c(2.0, 0.0)], vec![c(1.0, 1.0), c(0.0, -2.0)]]).unwrap();
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
        assert!((hs_inner(&a, &a).unwrap().re - a.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&CMatrix::identity(2), &CMatrix::identity(2)), CMatrix::identity(4));
        let k = kron(&CMatrix::unit(2, 0, 1), &CMatrix::unit(2, 1, 0));
        let mut expected = CMatrix::zeros(4, 4);
        // 1-based (2, 3)
        expected[(1, 2)] = ONE;
        assert_eq!(k, expected);
        assert_eq!(kron(&CMatrix::diag_real(&[1.0, 2.0]), &CMatrix::identity(2)), CMatrix::diag_real(&[1.0, 1.0, 2.0, 2.0]));
    }

    #[test]
    fn partial_trace_examples() {
        let z = partial_trace(&kron(&sigma_x(), &CMatrix::identity(2)), 2, 2, Factor::First).unwrap();
        assert_eq!(z, CMatrix::zeros(2, 2));
        let t = partial_trace(&CMatrix::identity(4), 2, 2, Factor::Second).unwrap();
        assert_eq!(t, CMatrix::identity(2).scale_real(2.0));
        let m = kron(&CMatrix::diag_real(&[1.0, 3.0]), &CMatrix::unit(2, 0, 0));
        assert_eq!(partial_trace(&m, 2, 2, Factor::First).unwrap(), CMatrix::unit(2, 0, 0).scale_real(4.0));
        assert!(partial_trace(&CMatrix::identity(5), 2, 2, Factor::First).is_err());
    }

    #[test]
    fn partial_trace_on_unequal_factors() {
        let a = CMatrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = CMatrix::from_real(&[&[1.0, 0.0, 2.0], &[0.0, 1.0, 0.0], &[5.0, 0.0, 1.0]]);
        let m = kron(&a, &b);
        let first = partial_trace(&m, 2, 3, Factor::First).unwrap();
        assert!(first.max_abs_diff(&b.scale_real(5.0)) < 1e-14);
        let second = partial_trace(&m, 2, 3, Factor::Second).unwrap();
        assert!(second.max_abs_diff(&a.scale_real(3.0)) < 1e-14);
    }

    #[test]
    fn gram_schmidt_examples() {
        let i2 = CMatrix::identity(2);
        let out = gram_schmidt(&[i2.clone(), i2.scale_real(2.0)], RANK_TOL).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].max_abs_diff(&i2.scale_real(std::f64::consts::FRAC_1_SQRT_2)) < 1e-15);

        let out = gram_schmidt(&[i2.clone(), &i2 + &sigma_x()], RANK_TOL).unwrap();
        assert_eq!(out.len(), 2);
        let overlap = hs_inner(&out[1], &sigma_x().scale_real(std::f64::consts::FRAC_1_SQRT_2)).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-14);

        let units: Vec<_> = (0..4).map(|k| CMatrix::unit(2, k / 2, k % 2)).collect();
        let out = gram_schmidt(&units, RANK_TOL).unwrap();
        for (a, b) in out.iter().zip(&units) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }

        assert!(matches!(gram_schmidt(&[], RANK_TOL), Err(Error::EmptyInput(_))));
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
            .prop_map(move |v| CMatrix::from_vec(n, n, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn kron_mixed_product(a in arb_matrix(2), b in arb_matrix(3), cm in arb_matrix(2), d in arb_matrix(3)) {
            let lhs = &kron(&a, &b) * &kron(&cm, &d);
            let rhs = kron(&(&a * &cm), &(&b * &d));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn kron_associative(a in arb_matrix(2), b in arb_matrix(2), cm in arb_matrix(3)) {
            let lhs = kron(&kron(&a, &b), &cm);
            let rhs = kron(&a, &kron(&b, &cm));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn partial_trace_of_product_state(a in arb_matrix(2), b in arb_matrix(3)) {
            let m = kron(&a, &b);
            let pt = partial_trace(&m, 2, 3, Factor::First).unwrap();
            prop_assert!(pt.max_abs_diff(&b.scale(a.trace())) < 1e-12);
        }

        #[test]
        fn gram_schmidt_orthonormal_and_spanning(mats in prop::collection::vec(arb_matrix(3), 1..7)) {
            let out = gram_schmidt(&mats, RANK_TOL).unwrap();
            for (i, x) in out.iter().enumerate() {
                for (j, y) in out.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((hs_inner(x, y).unwrap() - c(target, 0.0)).norm() < 1e-10);
                }
            }
            for m in &mats {
                prop_assert!(span_residual(m, &out) < 1e-10 * m.norm().max(1.0));
            }
        }
    }
}
