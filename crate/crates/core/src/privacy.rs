//! The orthogonality measure `Q(A,B)` and the privacy norm between two algebras.
//!
//! `Q(A,B) = Tr(T_A T_B)` is computed three ways: from natural representations, from
//! Choi matrices, and from the basis sum `Σ |Tr(A_i B_j)|²`. The privacy norm of `A`
//! against `B` is the largest singular value of `(T_A − T_D) T_B`, where `T_D` is the
//! complete depolarizing channel.

use serde::{Deserialize, Serialize};

use crate::algebra::UnitalStarAlgebra;
use crate::channels::{basis_projector, choi_of, depolarizing};
use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, CMatrix, CScalar};

/// Largest imaginary part tolerated in a trace that must be real.
pub const IMAG_TOL: f64 = 1e-10;
/// Largest disagreement tolerated between the three `Q` routes and in the
/// Frobenius identity.
pub const CONSISTENCY_TOL: f64 = 1e-8;
/// Default tolerance for the report verdicts.
pub const DEFAULT_TOL: f64 = 1e-8;

fn same_ambient(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra) -> Result<usize> {
    if a.ambient() != b.ambient() {
        return Err(Error::dim(format!("algebras live in M_{} and M_{}", a.ambient(), b.ambient())));
    }
    Ok(a.ambient())
}

fn real_part(z: CScalar, route: &str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * z.re.abs().max(1.0) {
        return Err(Error::InternalConsistency(format!("{route}: trace has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}

/// `Re Tr(T_A T_B)`.
pub fn q_via_natural(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra) -> Result<f64> {
    let n = same_ambient(a, b)?;
    let ta = basis_projector(n, a.basis());
    let tb = basis_projector(n, b.basis());
    real_part(ta.nat().trace_of_product(tb.nat())?, "Tr(T_A T_B)")
}

/// `Re Tr(C_A C_B)`.
pub fn q_via_choi(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra) -> Result<f64> {
    let n = same_ambient(a, b)?;
    let ca = choi_of(&basis_projector(n, a.basis()));
    let cb = choi_of(&basis_projector(n, b.basis()));
    real_part(ca.mat().trace_of_product(cb.mat())?, "Tr(C_A C_B)")
}

/// `Σ_ij |Tr(A_i B_j)|²` over the stored bases.
pub fn q_via_basis(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra) -> Result<f64> {
    same_ambient(a, b)?;
    let mut total = 0.0;
    for x in a.basis() {
        for y in b.basis() {
            total += x.trace_of_product(y)?.norm_sqr();
        }
    }
    Ok(total)
}

/// Consensus value of `Q(A,B)`.
pub fn q(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra) -> Result<f64> {
    q_via_choi(a, b)
}

/// `(T_A − T_D) T_B` as an `n² × n²` matrix.
pub fn deviation(privatizer: &UnitalStarAlgebra, target: &UnitalStarAlgebra) -> Result<CMatrix> {
    let n = same_ambient(privatizer, target)?;
    let ta = basis_projector(n, privatizer.basis());
    let tb = basis_projector(n, target.basis());
    Ok(ta.subtract(&depolarizing(n))?.compose(&tb)?.into_nat())
}

/// `‖(E_A − D_n) ∘ E_B‖₂`: how far the privatizer's channel is from fully
/// depolarizing the target algebra.
pub fn privacy_norm(privatizer: &UnitalStarAlgebra, target: &UnitalStarAlgebra) -> Result<f64> {
    Ok(spectral_norm(&deviation(privatizer, target)?))
}

/// `‖(T_A − T_D) T_B‖_F²`, checked against `Q(A,B) − 1`.
///
/// The identity holds because `T_A`, `T_B` and `T_D ≤ T_A, T_B` are orthogonal
/// projections; a gap above `1e-8` means one of the inputs is not an algebra.
pub fn frobenius_deviation_sq(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra) -> Result<f64> {
    let f = deviation(a, b)?.norm_sqr();
    let gap = (f - (q(a, b)? - 1.0)).abs();
    if gap > CONSISTENCY_TOL {
        return Err(Error::InternalConsistency(format!("Frobenius identity off by {gap:e}")));
    }
    Ok(f)
}

/// Everything known about a pair of algebras.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub n: usize,
    pub dim_a: usize,
    pub dim_b: usize,
    pub d_max: usize,
    pub d_min: usize,
    pub q_natural: f64,
    pub q_choi: f64,
    pub q_basis: f64,
    /// Consensus value (the Choi route).
    pub q: f64,
    /// Largest pairwise difference between the three routes.
    pub route_spread: f64,
    /// `‖(E_A − D_n) ∘ E_B‖₂`.
    pub eps_a_privatizes_b: f64,
    /// `‖(E_B − D_n) ∘ E_A‖₂`.
    pub eps_b_privatizes_a: f64,
    /// `‖(T_A − T_D) T_B‖_F²`.
    pub frobenius_sq_ab: f64,
    /// `|frobenius_sq_ab − (q − 1)|`.
    pub frobenius_gap: f64,
    /// `√((q − 1)(d_max − 1))`, the largest privacy norm the forward bound allows.
    pub forward_bound: f64,
    pub quasiorthogonal: bool,
    /// Both privacy norms are at most `forward_bound + tol`.
    pub forward_bound_ok: bool,
    /// `q − 1 ≤ (d_min − 1)·max(ε)² + tol`.
    pub converse_bound_ok: bool,
    /// `q − 1 ≤ (dim B − 1)·eps_a_privatizes_b² + tol`.
    pub converse_a_privatizes_b_ok: bool,
    /// `q − 1 ≤ (dim A − 1)·eps_b_privatizes_a² + tol`.
    pub converse_b_privatizes_a_ok: bool,
    /// Whether both inputs were validated as algebras.
    pub validated: bool,
    pub tol: f64,
}

/// Full report for two validated algebras.
///
/// Fails with `NotAnAlgebra` if either input is not a unital *-algebra, and with
/// `InternalConsistency` if the three `Q` routes or the Frobenius identity disagree
/// beyond `1e-8`.
pub fn analyze(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra, tol: f64) -> Result<OrthogonalityReport> {
    same_ambient(a, b)?;
    a.ensure_valid()?;
    b.ensure_valid()?;
    let report = compute_report(a, b, tol, true)?;
    if report.route_spread > CONSISTENCY_TOL {
        return Err(Error::InternalConsistency(format!("Q routes disagree by {:e}", report.route_spread)));
    }
    if report.frobenius_gap > CONSISTENCY_TOL {
        return Err(Error::InternalConsistency(format!("Frobenius identity off by {:e}", report.frobenius_gap)));
    }
    Ok(report)
}

/// Same report without validating the inputs or enforcing the consistency checks.
///
/// Meant for basis systems that are not algebras; the bound verdicts and the
/// Frobenius gap are reported as computed.
pub fn analyze_unchecked(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra, tol: f64) -> Result<OrthogonalityReport> {
    same_ambient(a, b)?;
    compute_report(a, b, tol, a.is_validated() && b.is_validated())
}

fn compute_report(a: &UnitalStarAlgebra, b: &UnitalStarAlgebra, tol: f64, validated: bool) -> Result<OrthogonalityReport> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Input("tolerance must be positive and finite".into()));
    }
    let n = a.ambient();
    let (dim_a, dim_b) = (a.dim(), b.dim());
    let (d_max, d_min) = (dim_a.max(dim_b), dim_a.min(dim_b));

    let q_natural = q_via_natural(a, b)?;
    let q_choi = q_via_choi(a, b)?;
    let q_basis = q_via_basis(a, b)?;
    let q = q_choi;
    let route_spread = (q_natural - q_choi).abs().max((q_choi - q_basis).abs()).max((q_natural - q_basis).abs());

    let dev_ab = deviation(a, b)?;
    let eps_a_privatizes_b = spectral_norm(&dev_ab);
    let eps_b_privatizes_a = privacy_norm(b, a)?;
    let frobenius_sq_ab = dev_ab.norm_sqr();
    let frobenius_gap = (frobenius_sq_ab - (q - 1.0)).abs();

    let excess = (q - 1.0).max(0.0);
    let forward_bound = (excess * (d_max as f64 - 1.0)).sqrt();
    let eps_max = eps_a_privatizes_b.max(eps_b_privatizes_a);
    let (forward_bound_ok, converse_bound_ok) = if d_max == 1 {
        (true, true)
    } else {
        (
            eps_max <= forward_bound + tol,
            q - 1.0 <= (d_min as f64 - 1.0) * eps_max * eps_max + tol,
        )
    };
    let converse_a_privatizes_b_ok = q - 1.0 <= (dim_b as f64 - 1.0) * eps_a_privatizes_b.powi(2) + tol;
    let converse_b_privatizes_a_ok = q - 1.0 <= (dim_a as f64 - 1.0) * eps_b_privatizes_a.powi(2) + tol;

    Ok(OrthogonalityReport {
        n,
        dim_a,
        dim_b,
        d_max,
        d_min,
        q_natural,
        q_choi,
        q_basis,
        q,
        route_spread,
        eps_a_privatizes_b,
        eps_b_privatizes_a,
        frobenius_sq_ab,
        frobenius_gap,
        forward_bound,
        quasiorthogonal: q <= 1.0 + tol,
        forward_bound_ok,
        converse_bound_ok,
        converse_a_privatizes_b_ok,
        converse_b_privatizes_a_ok,
        validated,
        tol,
    })
}
