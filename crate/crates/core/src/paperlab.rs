//! Worked examples with closed-form values, and a randomized harness that checks the
//! privacy/orthogonality inequalities on conjugated algebra pairs.
//!
//! In both perturbed examples the perturbation `V = e^T` with `T = diag(δ, −δ, 0, 0)`
//! is positive definite rather than unitary, so `V B V*` is not a unital *-algebra
//! once `δ > 0`. The perturbed system is therefore built by pushing the standardized
//! orthonormal basis of `B` through the congruence, and evaluated without algebra
//! validation. [`ExampleSystem::c_is_algebra`] records which case applies.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{build, validate, AlgebraSpec, UnitalStarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{expm, haar_unitary, kron, CMatrix, CScalar};
use crate::mub::{fourier_basis, masa_of, standard_basis};
use crate::privacy::{analyze, analyze_unchecked, OrthogonalityReport, CONSISTENCY_TOL};

/// Relative agreement required between a computed value and its closed form.
pub const EXAMPLE_REL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleName {
    /// Two classically addressed qubits against a perturbed two-dimensional algebra.
    Hybrid,
    /// Diagonal algebra against a perturbed rotated qubit subsystem.
    Subsystem,
    /// Standard and Fourier MASAs.
    Mub,
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hybrid" => Ok(Self::Hybrid),
            "subsystem" => Ok(Self::Subsystem),
            "mub" => Ok(Self::Mub),
            other => Err(Error::Input(format!("unknown example `{other}` (expected hybrid, subsystem or mub)"))),
        }
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hybrid => "hybrid",
            Self::Subsystem => "subsystem",
            Self::Mub => "mub",
        })
    }
}

/// Which example to build, and at which parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleCase {
    pub name: ExampleName,
    /// Perturbation size; ignored by `mub`.
    pub delta: f64,
    /// Ambient dimension; fixed at 4 except for `mub`.
    pub n: usize,
}

impl ExampleCase {
    pub fn hybrid(delta: f64) -> Self {
        Self { name: ExampleName::Hybrid, delta, n: 4 }
    }

    pub fn subsystem(delta: f64) -> Self {
        Self { name: ExampleName::Subsystem, delta, n: 4 }
    }

    pub fn mub(n: usize) -> Self {
        Self { name: ExampleName::Mub, delta: 0.0, n }
    }

    pub fn build(&self) -> Result<ExampleSystem> {
        match self.name {
            ExampleName::Hybrid => example_hybrid(self.delta),
            ExampleName::Subsystem => example_subsystem(self.delta),
            ExampleName::Mub => example_mub(self.n),
        }
    }
}

/// An example pair with its closed-form `Q`.
#[derive(Clone, Debug)]
pub struct ExampleSystem {
    pub a: UnitalStarAlgebra,
    pub c: UnitalStarAlgebra,
    pub expected_q: f64,
    /// False when the perturbed basis system fails validation.
    pub c_is_algebra: bool,
}

/// `½(cosh 4δ + cosh 2δ)`.
pub fn hybrid_closed_form(delta: f64) -> f64 {
    0.5 * ((4.0 * delta).cosh() + (2.0 * delta).cosh())
}

/// `¼ e^{−4δ} (e^{4δ} + 1)²`.
pub fn subsystem_closed_form(delta: f64) -> f64 {
    0.25 * (-4.0 * delta).exp() * ((4.0 * delta).exp() + 1.0).powi(2)
}

/// `e^T` with `T = diag(δ, −δ, 0, 0)`.
pub fn perturbation(delta: f64) -> Result<CMatrix> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::Input(format!("delta must be finite and >= 0, got {delta}")));
    }
    expm(&CMatrix::diag_real(&[delta, -delta, 0.0, 0.0]))
}

/// `span{I_4, [[0, σx], [σx, 0]]}`.
pub fn hybrid_b() -> Result<UnitalStarAlgebra> {
    let k = CMatrix::from_fn(4, 4, |i, j| {
        CScalar::new(if (i < 2) != (j < 2) && i % 2 != j % 2 { 1.0 } else { 0.0 }, 0.0)
    });
    build(&AlgebraSpec::span(4, vec![CMatrix::identity(4), k]))
}

/// The 4×4 unitary of the subsystem example.
pub fn subsystem_unitary() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (r, i) = (CScalar::new(s, 0.0), CScalar::new(0.0, s));
    let z = CScalar::new(0.0, 0.0);
    CMatrix::from_rows(&[vec![r, z, -i, z], vec![z, r, z, i], vec![z, r, z, -i], vec![r, z, i, z]])
        .expect("fixed 4x4 matrix")
}

/// `U* (I_2 ⊗ M_2) U`.
pub fn subsystem_b() -> Result<UnitalStarAlgebra> {
    let units = (0..4).map(|k| kron(&CMatrix::identity(2), &CMatrix::unit(2, k / 2, k % 2))).collect();
    build(&AlgebraSpec::conjugated(subsystem_unitary().adjoint(), AlgebraSpec::span(4, units)))
}

/// Applies `X ↦ L X R` to every basis element; validates the result if it happens
/// to be an algebra.
fn congruence(b: &UnitalStarAlgebra, left: &CMatrix, right: &CMatrix) -> Result<(UnitalStarAlgebra, bool)> {
    let basis = b.basis().iter().map(|x| &(left * x) * right).collect();
    let c = UnitalStarAlgebra::from_raw_parts(b.ambient(), basis)?;
    if validate(&c).passed {
        Ok((c.validated()?, true))
    } else {
        Ok((c, false))
    }
}

/// `A = M_2 ⊕ M_2` against `C = V B V*`, `B = span{I, [[0, σx], [σx, 0]]}`.
pub fn example_hybrid(delta: f64) -> Result<ExampleSystem> {
    let v = perturbation(delta)?;
    let a = build(&AlgebraSpec::blocks(vec![2, 2]))?;
    let (c, c_is_algebra) = congruence(&hybrid_b()?, &v, &v.adjoint())?;
    Ok(ExampleSystem { a, c, expected_q: hybrid_closed_form(delta), c_is_algebra })
}

/// `A = Δ_4` against `C = V* B V`, `B = U* (I_2 ⊗ M_2) U`.
pub fn example_subsystem(delta: f64) -> Result<ExampleSystem> {
    let v = perturbation(delta)?;
    let a = masa_of(&standard_basis(4))?;
    let (c, c_is_algebra) = congruence(&subsystem_b()?, &v.adjoint(), &v)?;
    Ok(ExampleSystem { a, c, expected_q: subsystem_closed_form(delta), c_is_algebra })
}

/// MASAs of the standard and Fourier bases of `C^n`; always quasiorthogonal.
pub fn example_mub(n: usize) -> Result<ExampleSystem> {
    if n < 2 {
        return Err(Error::Input(format!("mub example needs n >= 2, got {n}")));
    }
    Ok(ExampleSystem {
        a: masa_of(&standard_basis(n))?,
        c: masa_of(&fourier_basis(n))?,
        expected_q: 1.0,
        c_is_algebra: true,
    })
}

/// Computed versus closed-form `Q` for one example.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub name: ExampleName,
    pub delta: f64,
    pub n: usize,
    pub computed_q: f64,
    pub expected_q: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    /// `rel_diff ≤ 1e-8`.
    pub matches: bool,
    pub c_is_algebra: bool,
    pub analysis: OrthogonalityReport,
}

pub fn evaluate_example(case: &ExampleCase, tol: f64) -> Result<ExampleReport> {
    let sys = case.build()?;
    let analysis = if sys.c_is_algebra { analyze(&sys.a, &sys.c, tol)? } else { analyze_unchecked(&sys.a, &sys.c, tol)? };
    let abs_diff = (analysis.q - sys.expected_q).abs();
    let rel_diff = abs_diff / sys.expected_q.abs();
    Ok(ExampleReport {
        name: case.name,
        delta: if case.name == ExampleName::Mub { 0.0 } else { case.delta },
        n: sys.a.ambient(),
        computed_q: analysis.q,
        expected_q: sys.expected_q,
        abs_diff,
        rel_diff,
        matches: rel_diff <= EXAMPLE_REL_TOL,
        c_is_algebra: sys.c_is_algebra,
        analysis,
    })
}

/// Randomized check: `spec_b` is conjugated by a fresh Haar unitary in every trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    pub n: usize,
    pub spec_a: AlgebraSpec,
    pub spec_b: AlgebraSpec,
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
}

/// One trial's measurements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// 1-based trial index.
    pub trial: usize,
    /// Seed of the Haar unitary for this trial (`seed + trial`).
    pub seed: u64,
    pub q: f64,
    pub eps_a_privatizes_b: f64,
    pub eps_b_privatizes_a: f64,
    pub forward_bound: f64,
    pub forward_bound_ok: bool,
    pub converse_bound_ok: bool,
    pub route_spread: f64,
    pub frobenius_gap: f64,
}

impl TrialRecord {
    /// Internal cross-checks (route agreement, Frobenius identity) within `1e-8`.
    pub fn consistent(&self) -> bool {
        self.route_spread <= CONSISTENCY_TOL && self.frobenius_gap <= CONSISTENCY_TOL
    }

    pub fn violates(&self) -> bool {
        !(self.forward_bound_ok && self.converse_bound_ok && self.consistent())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub n: usize,
    pub dim_a: usize,
    pub dim_b: usize,
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub q_mean: f64,
    pub max_route_spread: f64,
    pub max_frobenius_gap: f64,
    pub forward_violations: usize,
    pub converse_violations: usize,
    pub consistency_violations: usize,
    /// Every trial that failed an inequality or a cross-check.
    pub violations: Vec<TrialRecord>,
    pub records: Vec<TrialRecord>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs `cfg.count` trials. Trial `t` conjugates `spec_b` by
/// `haar_unitary(n, seed + t)`; trials run in parallel and are reported in order, so
/// the report depends only on the configuration.
pub fn run_trials(cfg: &TrialConfig) -> Result<TrialReport> {
    if cfg.count == 0 {
        return Err(Error::Input("trial count must be at least 1".into()));
    }
    if !(cfg.tol > 0.0) || !cfg.tol.is_finite() {
        return Err(Error::Input("tolerance must be positive and finite".into()));
    }
    if cfg.spec_a.n != cfg.n || cfg.spec_b.n != cfg.n {
        return Err(Error::dim(format!(
            "trial dimension {} does not match specs ({} and {})",
            cfg.n, cfg.spec_a.n, cfg.spec_b.n
        )));
    }
    let a = build(&cfg.spec_a)?;
    let b = build(&cfg.spec_b)?;
    let tol = crate::algebra::Tolerances::default();

    let records: Vec<TrialRecord> = (1..=cfg.count)
        .into_par_iter()
        .map(|trial| {
            let seed = cfg.seed.wrapping_add(trial as u64);
            let wrap = |e: Error| Error::Trial { trial, seed, source: Box::new(e) };
            let bt = b.conjugate_by(&haar_unitary(cfg.n, seed), &tol).map_err(wrap)?;
            let r = analyze_unchecked(&a, &bt, cfg.tol).map_err(wrap)?;
            Ok(TrialRecord {
                trial,
                seed,
                q: r.q,
                eps_a_privatizes_b: r.eps_a_privatizes_b,
                eps_b_privatizes_a: r.eps_b_privatizes_a,
                forward_bound: r.forward_bound,
                forward_bound_ok: r.forward_bound_ok,
                converse_bound_ok: r.converse_bound_ok,
                route_spread: r.route_spread,
                frobenius_gap: r.frobenius_gap,
            })
        })
        .collect::<Result<_>>()?;

    let qs = records.iter().map(|r| r.q);
    let q_min = qs.clone().fold(f64::INFINITY, f64::min);
    let q_max = qs.clone().fold(f64::NEG_INFINITY, f64::max);
    let q_mean = qs.sum::<f64>() / records.len() as f64;
    Ok(TrialReport {
        n: cfg.n,
        dim_a: a.dim(),
        dim_b: b.dim(),
        seed: cfg.seed,
        count: cfg.count,
        tol: cfg.tol,
        q_min,
        q_max,
        q_mean,
        max_route_spread: records.iter().map(|r| r.route_spread).fold(0.0, f64::max),
        max_frobenius_gap: records.iter().map(|r| r.frobenius_gap).fold(0.0, f64::max),
        forward_violations: records.iter().filter(|r| !r.forward_bound_ok).count(),
        converse_violations: records.iter().filter(|r| !r.converse_bound_ok).count(),
        consistency_violations: records.iter().filter(|r| !r.consistent()).count(),
        violations: records.iter().filter(|r| r.violates()).cloned().collect(),
        records,
    })
}
