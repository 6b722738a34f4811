//! Linear maps on `M_n(C)`.
//!
//! Vectorization is row-major throughout: `vec(X)[i*n + j] = X[i][j]`. A
//! [`Superoperator`] stores its natural representation `T` with
//! `T · vec(X) = vec(Φ(X))`, so `T[(a,b),(c,d)] = Φ(E_cd)[a][b]`.
//!
//! The Choi matrix is `C = Σ_ij E_ij ⊗ Φ(E_ij)`, i.e. `C[(i,k),(j,l)] = Φ(E_ij)[k][l]`.
//! It holds the same entries as `T`, permuted.

use crate::algebra::UnitalStarAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, unvectorize, vectorize, CMatrix, CScalar};

/// Default relative eigenvalue cutoff for [`kraus_of`].
pub const KRAUS_TOL: f64 = 1e-10;

/// Linear map on `M_n(C)` in natural representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    n: usize,
    nat: CMatrix,
}

impl Superoperator {
    pub fn from_nat(n: usize, nat: CMatrix) -> Result<Self> {
        check_n2(n, &nat, "natural representation")?;
        Ok(Self { n, nat })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, nat: CMatrix::identity(n * n) }
    }

    pub fn zero(n: usize) -> Self {
        Self { n, nat: CMatrix::zeros(n * n, n * n) }
    }

    /// Tabulates a linear action on the matrix units.
    pub fn from_action(n: usize, action: impl Fn(&CMatrix) -> CMatrix) -> Result<Self> {
        if n == 0 {
            return Err(Error::dim("superoperators need n >= 1"));
        }
        let n2 = n * n;
        let mut nat = CMatrix::zeros(n2, n2);
        for c in 0..n {
            for d in 0..n {
                let out = action(&CMatrix::unit(n, c, d));
                if out.rows() != n || out.cols() != n {
                    return Err(Error::dim(format!(
                        "action returned {}x{}, expected {n}x{n}",
                        out.rows(),
                        out.cols()
                    )));
                }
                let col = c * n + d;
                for (row, v) in out.as_slice().iter().enumerate() {
                    nat[(row, col)] = *v;
                }
            }
        }
        Ok(Self { n, nat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nat(&self) -> &CMatrix {
        &self.nat
    }

    pub fn into_nat(self) -> CMatrix {
        self.nat
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.rows() != self.n || x.cols() != self.n {
            return Err(Error::dim(format!("input must be {0}x{0}", self.n)));
        }
        unvectorize(&self.nat.mul_vec(&vectorize(x)), self.n)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        Ok(Self { n: self.n, nat: &self.nat * &other.nat })
    }

    pub fn subtract(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        Ok(Self { n: self.n, nat: &self.nat - &other.nat })
    }

    pub fn choi(&self) -> ChoiMatrix {
        choi_of(self)
    }

    fn same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::dim(format!("superoperators act on M_{} and M_{}", self.n, other.n)));
        }
        Ok(())
    }
}

/// Choi matrix `Σ E_ij ⊗ Φ(E_ij)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    n: usize,
    mat: CMatrix,
}

impl ChoiMatrix {
    pub fn from_matrix(n: usize, mat: CMatrix) -> Result<Self> {
        check_n2(n, &mat, "Choi matrix")?;
        Ok(Self { n, mat })
    }

    /// `Σ_i conj(A_i) ⊗ A_i`, the Choi matrix of the orthogonal projection onto the
    /// span of the orthonormal set `onb`.
    pub fn from_orthonormal_basis(n: usize, onb: &[CMatrix]) -> Result<Self> {
        if n == 0 || onb.iter().any(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::dim(format!("basis elements must be {n}x{n}")));
        }
        let mut mat = CMatrix::zeros(n * n, n * n);
        for a in onb {
            mat = &mat + &kron(&a.conj(), a);
        }
        Ok(Self { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn superoperator(&self) -> Superoperator {
        superop_of(self)
    }
}

/// Kraus operators `{K}` with `Φ(X) = Σ K X K*`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    n: usize,
    ops: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let n = ops.first().ok_or_else(|| Error::EmptyInput("a Kraus set needs at least one operator".into()))?.rows();
        if n == 0 || ops.iter().any(|k| k.rows() != n || k.cols() != n) {
            return Err(Error::dim("Kraus operators must share one square shape"));
        }
        Ok(Self { n, ops })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.rows() != self.n || x.cols() != self.n {
            return Err(Error::dim(format!("input must be {0}x{0}", self.n)));
        }
        let mut out = CMatrix::zeros(self.n, self.n);
        for k in &self.ops {
            out = &out + &(&(k * x) * &k.adjoint());
        }
        Ok(out)
    }

    /// `C[(i,k),(j,l)] = Σ K[k][i] conj(K[l][j])`.
    pub fn choi(&self) -> ChoiMatrix {
        let n = self.n;
        let mut mat = CMatrix::zeros(n * n, n * n);
        for k in &self.ops {
            let v: Vec<CScalar> = (0..n * n).map(|r| k[(r % n, r / n)]).collect();
            for (r, vr) in v.iter().enumerate() {
                for (c, vc) in v.iter().enumerate() {
                    mat[(r, c)] += vr * vc.conj();
                }
            }
        }
        ChoiMatrix { n, mat }
    }

    /// `‖Σ K*K − I‖_F`; zero for trace-preserving maps.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut sum = CMatrix::zeros(self.n, self.n);
        for k in &self.ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        (&sum - &CMatrix::identity(self.n)).norm()
    }
}

/// Reshuffles the natural representation into the Choi matrix. Exact.
pub fn choi_of(s: &Superoperator) -> ChoiMatrix {
    let n = s.n;
    let mat = CMatrix::from_fn(n * n, n * n, |r, c| {
        let (i, k, j, l) = (r / n, r % n, c / n, c % n);
        s.nat[(k * n + l, i * n + j)]
    });
    ChoiMatrix { n, mat }
}

/// Inverse of [`choi_of`]. Exact.
pub fn superop_of(c: &ChoiMatrix) -> Superoperator {
    let n = c.n;
    let nat = CMatrix::from_fn(n * n, n * n, |r, col| {
        let (a, b, cc, d) = (r / n, r % n, col / n, col % n);
        c.mat[(cc * n + a, d * n + b)]
    });
    Superoperator { n, nat }
}

/// Kraus operators from the eigendecomposition of a Choi matrix.
///
/// Eigenvalues below `tol · λ_max` are dropped; one below
/// `−max(tol, 1e-9) · max(λ_max, 1)` means the map is not completely positive.
/// Each eigenpair `(λ, v)` gives `K[k][i] = √λ · v[i*n + k]`.
pub fn kraus_of(c: &ChoiMatrix, tol: f64) -> Result<KrausSet> {
    if !(tol > 0.0) {
        return Err(Error::Input("Kraus tolerance must be positive".into()));
    }
    let scale = c.mat.norm();
    let defect = c.mat.hermitian_defect();
    if defect > 1e-9 * scale.max(1.0) {
        return Err(Error::Hermiticity { residual: defect });
    }
    let eig = eig_hermitian(&c.mat.hermitian_part())?;
    let lmax = eig.max_value();
    let floor = -tol.max(1e-9) * lmax.max(1.0);
    if let Some(&bad) = eig.values.iter().find(|&&l| l < floor) {
        return Err(Error::NotCompletelyPositive { eigenvalue: bad });
    }
    let n = c.n;
    let ops: Vec<CMatrix> = eig
        .values
        .iter()
        .enumerate()
        .rev()
        .filter(|&(_, &l)| l > tol * lmax && l > 0.0)
        .map(|(idx, &l)| {
            let s = l.sqrt();
            CMatrix::from_fn(n, n, |k, i| eig.vectors[(i * n + k, idx)] * s)
        })
        .collect();
    if ops.is_empty() {
        return Ok(KrausSet { n, ops: vec![CMatrix::zeros(n, n)] });
    }
    Ok(KrausSet { n, ops })
}

/// `D_n(X) = Tr(X)/n · I_n`.
pub fn depolarizing(n: usize) -> Superoperator {
    assert!(n >= 1, "depolarizing needs n >= 1");
    let inv = 1.0 / n as f64;
    let nat = CMatrix::from_fn(n * n, n * n, |r, c| {
        let diag_out = r / n == r % n;
        let diag_in = c / n == c % n;
        CScalar::new(if diag_out && diag_in { inv } else { 0.0 }, 0.0)
    });
    Superoperator { n, nat }
}

/// Natural representation of the trace-preserving conditional expectation onto
/// `alg`: `E(X) = Σ ⟨X, A_i⟩ A_i`, so `T = Σ vec(A_i) vec(A_i)*`.
pub fn conditional_expectation(alg: &UnitalStarAlgebra) -> Result<Superoperator> {
    alg.ensure_valid()?;
    Ok(basis_projector(alg.ambient(), alg.basis()))
}

/// Orthogonal projection onto the span of an orthonormal set, without checking that
/// the span is an algebra.
pub fn basis_projector(n: usize, onb: &[CMatrix]) -> Superoperator {
    let n2 = n * n;
    let mut nat = CMatrix::zeros(n2, n2);
    for a in onb {
        let v = a.as_slice();
        for r in 0..n2 {
            if v[r] == CScalar::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n2 {
                nat[(r, c)] += v[r] * v[c].conj();
            }
        }
    }
    Superoperator { n, nat }
}

fn check_n2(n: usize, m: &CMatrix, what: &str) -> Result<()> {
    let n2 = n * n;
    if n == 0 || m.rows() != n2 || m.cols() != n2 {
        return Err(Error::dim(format!("{what} for n = {n} must be {n2}x{n2}, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}
