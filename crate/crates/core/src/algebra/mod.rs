//! Unital *-subalgebras of `M_n(C)`.
//!
//! An algebra is stored as a Hilbert–Schmidt orthonormal basis in *standard form*:
//! element 0 is `I_n/√n` and every other element is Hermitian and traceless.
//! Every measure in the crate assumes that form, so [`build`] always produces it.

mod spec;

pub use spec::{AlgebraSpec, SpecKind};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    extend_orthonormal, gram_schmidt, hs_inner, orthonormality_defect, span_residual, CMatrix, CScalar, RANK_TOL,
};

/// Tolerances used while building and validating algebras.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Orthonormality of supplied vectors/bases and unitarity of conjugating matrices.
    pub orthonormality: f64,
    /// Closure residuals (identity, adjoint, product).
    pub closure: f64,
    /// Relative Gram–Schmidt drop tolerance.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { orthonormality: 1e-10, closure: 1e-9, rank: RANK_TOL }
    }
}

/// A unital *-subalgebra of `M_n(C)` held as a standardized orthonormal basis.
#[derive(Clone, Debug)]
pub struct UnitalStarAlgebra {
    n: usize,
    onb: Vec<CMatrix>,
    validated: bool,
}

impl UnitalStarAlgebra {
    /// Wraps a basis without checking anything but shapes.
    ///
    /// The result is not assumed to be an algebra; operations that need one
    /// (conditional expectations, [`crate::privacy::analyze`]) validate it first.
    pub fn from_raw_parts(n: usize, onb: Vec<CMatrix>) -> Result<Self> {
        if n == 0 || onb.is_empty() {
            return Err(Error::EmptyInput("an algebra needs n >= 1 and a nonempty basis".into()));
        }
        if onb.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::dim(format!("basis elements must be {n}x{n}")));
        }
        Ok(Self { n, onb, validated: false })
    }

    /// Ambient dimension `n`.
    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Algebra dimension.
    pub fn dim(&self) -> usize {
        self.onb.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.onb
    }

    /// True when the algebra came out of [`build`] (or passed [`Self::ensure_valid`]).
    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Checks the algebra axioms unless they are already known to hold.
    pub fn ensure_valid(&self) -> Result<()> {
        if self.validated {
            return Ok(());
        }
        let report = validate(self);
        match report.first_failure() {
            None => Ok(()),
            Some((reason, residual)) => Err(Error::not_algebra(reason, residual)),
        }
    }

    /// Validated copy.
    pub fn validated(mut self) -> Result<Self> {
        self.ensure_valid()?;
        self.validated = true;
        Ok(self)
    }

    /// `U A U*` for every basis element. Keeps standard form when `u` is unitary.
    pub fn conjugate_by(&self, u: &CMatrix, tol: &Tolerances) -> Result<Self> {
        if u.rows() != self.n || u.cols() != self.n {
            return Err(Error::dim(format!("conjugating matrix must be {}x{}", self.n, self.n)));
        }
        let defect = u.unitarity_defect();
        if defect > tol.orthonormality {
            return Err(Error::NotUnitary { residual: defect });
        }
        let uadj = u.adjoint();
        let mut onb: Vec<CMatrix> = self.onb.iter().map(|b| (&(u * b) * &uadj).hermitian_part()).collect();
        onb[0] = scaled_identity(self.n);
        Ok(Self { n: self.n, onb, validated: self.validated })
    }
}

/// `I_n / √n`.
pub fn scaled_identity(n: usize) -> CMatrix {
    CMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt())
}

/// Builds and validates an algebra with default tolerances.
pub fn build(spec: &AlgebraSpec) -> Result<UnitalStarAlgebra> {
    build_with(spec, &Tolerances::default())
}

pub fn build_with(spec: &AlgebraSpec, tol: &Tolerances) -> Result<UnitalStarAlgebra> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::Input("ambient dimension must be positive".into()));
    }
    let onb = match &spec.kind {
        SpecKind::Span(mats) => {
            check_shapes(n, mats)?;
            let onb = gram_schmidt(mats, tol.rank)?;
            check_closed(n, &onb, tol)?;
            standardize_with(&onb, tol)?
        }
        SpecKind::Generators(mats) => {
            check_shapes(n, mats)?;
            let onb = close_generators(n, mats, tol)?;
            standardize_with(&onb, tol)?
        }
        SpecKind::Blocks(blocks) => {
            if blocks.is_empty() || blocks.contains(&0) {
                return Err(Error::Input("block sizes must be positive".into()));
            }
            let total: usize = blocks.iter().sum();
            if total != n {
                return Err(Error::Input(format!("block sizes sum to {total}, expected {n}")));
            }
            let mut units = Vec::with_capacity(blocks.iter().map(|b| b * b).sum());
            let mut offset = 0;
            for &b in blocks {
                for i in 0..b {
                    for j in 0..b {
                        units.push(CMatrix::unit(n, offset + i, offset + j));
                    }
                }
                offset += b;
            }
            standardize_with(&units, tol)?
        }
        SpecKind::Masa(vectors) => {
            if vectors.len() != n || vectors.iter().any(|v| v.dim() != n) {
                return Err(Error::dim(format!("a MASA in M_{n} needs {n} vectors of length {n}")));
            }
            let defect = orthonormality_defect(vectors);
            if defect > tol.orthonormality {
                return Err(Error::basis("MASA vectors are not orthonormal", defect));
            }
            let projectors: Vec<_> = vectors.iter().map(|v| v.projector()).collect();
            standardize_with(&projectors, tol)?
        }
        SpecKind::Conjugated { unitary, inner } => {
            if inner.n != n {
                return Err(Error::dim(format!("inner spec has n = {}, outer n = {n}", inner.n)));
            }
            return build_with(inner, tol)?.conjugate_by(unitary, tol);
        }
    };
    Ok(UnitalStarAlgebra { n, onb, validated: true })
}

fn check_shapes(n: usize, mats: &[CMatrix]) -> Result<()> {
    if let Some(m) = mats.iter().find(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::dim(format!("expected {n}x{n} matrices, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

fn check_closed(n: usize, onb: &[CMatrix], tol: &Tolerances) -> Result<()> {
    let unit = span_residual(&scaled_identity(n), onb);
    if unit > tol.closure {
        return Err(Error::not_algebra("span does not contain the identity", unit));
    }
    let star = onb.iter().map(|b| span_residual(&b.adjoint(), onb)).fold(0.0, f64::max);
    if star > tol.closure {
        return Err(Error::not_algebra("span is not closed under the adjoint", star));
    }
    let mult = max_product_residual(onb);
    if mult > tol.closure {
        return Err(Error::not_algebra("span is not closed under multiplication", mult));
    }
    Ok(())
}

fn max_product_residual(onb: &[CMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in onb {
        for b in onb {
            worst = worst.max(span_residual(&(a * b), onb));
        }
    }
    worst
}

/// Smallest *-algebra containing the generators and the identity.
fn close_generators(n: usize, mats: &[CMatrix], tol: &Tolerances) -> Result<Vec<CMatrix>> {
    let mut seed = vec![CMatrix::identity(n)];
    for m in mats {
        seed.push(m.clone());
        seed.push(m.adjoint());
    }
    let mut onb = gram_schmidt(&seed, tol.rank)?;
    // The span grows every round until it stabilizes, and can never exceed n².
    for _ in 0..n * n {
        let products: Vec<CMatrix> = onb.iter().flat_map(|a| onb.iter().map(move |b| a * b)).collect();
        if extend_orthonormal(&mut onb, products, tol.closure) == 0 {
            return Ok(onb);
        }
        if onb.len() > n * n {
            break;
        }
    }
    Err(Error::not_algebra("generator closure did not stabilize within n² rounds", onb.len() as f64))
}

/// Rewrites an orthonormal basis of a unital *-closed span into standard form.
pub fn standardize_basis(raw_onb: &[CMatrix]) -> Result<Vec<CMatrix>> {
    standardize_with(raw_onb, &Tolerances::default())
}

pub fn standardize_with(raw_onb: &[CMatrix], tol: &Tolerances) -> Result<Vec<CMatrix>> {
    let first = raw_onb.first().ok_or_else(|| Error::EmptyInput("standardize_basis needs a basis".into()))?;
    let n = first.rows();
    check_shapes(n, raw_onb)?;
    let onb = gram_schmidt(raw_onb, tol.rank)?;
    let unit = scaled_identity(n);

    let missing = span_residual(&unit, &onb);
    if missing > tol.closure {
        return Err(Error::NotUnital { residual: missing });
    }
    let star = onb.iter().map(|b| span_residual(&b.adjoint(), &onb)).fold(0.0, f64::max);
    if star > tol.closure {
        return Err(Error::NotStarClosed { residual: star });
    }

    let i_unit = CScalar::new(0.0, 1.0);
    let mut candidates = Vec::with_capacity(2 * onb.len());
    for b in &onb {
        let mut traceless = b.clone();
        traceless.axpy(-hs_inner(b, &unit)?, &unit);
        let adj = traceless.adjoint();
        candidates.push((&traceless + &adj).scale_real(0.5));
        candidates.push((&traceless - &adj).scale(-i_unit * 0.5));
    }

    let mut out = vec![unit];
    let scale = onb.iter().map(CMatrix::norm).fold(1.0, f64::max);
    for c in candidates {
        let before = out.len();
        extend_orthonormal(&mut out, std::iter::once(c), tol.rank * scale);
        if out.len() > before {
            let last = out.pop().expect("just pushed");
            let h = last.hermitian_part();
            let nrm = h.norm();
            out.push(h.scale_real(1.0 / nrm));
        }
    }
    if out.len() != onb.len() {
        return Err(Error::InternalConsistency(format!(
            "standardized basis has {} elements, span has dimension {}",
            out.len(),
            onb.len()
        )));
    }
    Ok(out)
}

/// Residuals of every algebra axiom for a stored basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub dim: usize,
    /// `max |⟨A_i, A_j⟩ − δ_ij|`.
    pub orthonormality: f64,
    /// `‖A_0 − I/√n‖`.
    pub identity_first: f64,
    /// Distance of `I/√n` from the span.
    pub unitality: f64,
    /// Worst distance of an adjoint `A_i*` from the span.
    pub star_closure: f64,
    /// Worst distance of a product `A_i A_j` from the span.
    pub multiplicative_closure: f64,
    /// `max ‖A_i − A_i*‖`.
    pub hermiticity: f64,
    /// `max |Tr A_k|` for `k ≥ 1`.
    pub traceless: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ValidationReport {
    /// Residual fields with their names, in reporting order.
    pub fn residuals(&self) -> [(&'static str, f64); 7] {
        [
            ("orthonormality", self.orthonormality),
            ("identity_first", self.identity_first),
            ("unitality", self.unitality),
            ("star_closure", self.star_closure),
            ("multiplicative_closure", self.multiplicative_closure),
            ("hermiticity", self.hermiticity),
            ("traceless", self.traceless),
        ]
    }

    pub fn first_failure(&self) -> Option<(&'static str, f64)> {
        self.residuals().into_iter().find(|&(_, r)| !(r <= self.tolerance))
    }
}

/// Checks every algebra axiom on the stored basis; passes iff all residuals are at
/// most `1e-9`.
pub fn validate(alg: &UnitalStarAlgebra) -> ValidationReport {
    validate_with(alg, Tolerances::default().closure)
}

pub fn validate_with(alg: &UnitalStarAlgebra, tolerance: f64) -> ValidationReport {
    let onb = &alg.onb;
    let n = alg.n;
    let unit = scaled_identity(n);
    let mut orthonormality: f64 = 0.0;
    for (i, a) in onb.iter().enumerate() {
        for (j, b) in onb.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            let ip = crate::linalg::hs_inner_unchecked(a, b);
            orthonormality = orthonormality.max((ip - CScalar::new(target, 0.0)).norm());
        }
    }
    let identity_first = (&onb[0] - &unit).norm();
    let unitality = span_residual(&unit, onb);
    let star_closure = onb.iter().map(|b| span_residual(&b.adjoint(), onb)).fold(0.0, f64::max);
    let multiplicative_closure = max_product_residual(onb);
    let hermiticity = onb.iter().map(CMatrix::hermitian_defect).fold(0.0, f64::max);
    let traceless = onb.iter().skip(1).map(|b| b.trace().norm()).fold(0.0, f64::max);
    let mut report = ValidationReport {
        n,
        dim: onb.len(),
        orthonormality,
        identity_first,
        unitality,
        star_closure,
        multiplicative_closure,
        hermiticity,
        traceless,
        tolerance,
        passed: false,
    };
    report.passed = report.first_failure().is_none();
    report
}

/// Diagnostic report for a raw span: orthonormalizes `mats` and validates the
/// result without standardizing, so failures show up as residuals rather than
/// as a build error.
pub fn span_report(n: usize, mats: &[CMatrix]) -> Result<ValidationReport> {
    check_shapes(n, mats)?;
    let onb = gram_schmidt(mats, RANK_TOL)?;
    Ok(validate(&UnitalStarAlgebra::from_raw_parts(n, onb)?))
}

/// Worst residual when each basis is reconstructed from the other one's span.
/// Zero (to rounding) iff the two bases span the same subspace.
pub fn span_distance(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra) -> f64 {
    let ab = a.onb.iter().map(|x| span_residual(x, &b.onb)).fold(0.0, f64::max);
    let ba = b.onb.iter().map(|x| span_residual(x, &a.onb)).fold(0.0, f64::max);
    ab.max(ba)
}
