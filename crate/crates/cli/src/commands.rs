use std::fmt::Write as _;
use std::path::Path;

use quasiortho::algebra::{self, AlgebraSpec, SpecKind, ValidationReport};
use quasiortho::mub::{self, BasisFamily};
use quasiortho::paperlab::{self, ExampleCase, ExampleName, ExampleReport, TrialConfig, TrialReport};
use quasiortho::privacy::{self, OrthogonalityReport};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::output::{table, verdict, CliError, Outcome};

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let raw = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&raw).map_err(|e| CliError::parse(path, e))
}

fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn render_orthogonality(r: &OrthogonalityReport) -> String {
    table(&[
        ("n", r.n.to_string()),
        ("dim A / dim B", format!("{} / {}", r.dim_a, r.dim_b)),
        ("d_max / d_min", format!("{} / {}", r.d_max, r.d_min)),
        ("Q (natural)", num(r.q_natural)),
        ("Q (Choi)", num(r.q_choi)),
        ("Q (basis)", num(r.q_basis)),
        ("route spread", num(r.route_spread)),
        ("eps A privatizes B", num(r.eps_a_privatizes_b)),
        ("eps B privatizes A", num(r.eps_b_privatizes_a)),
        ("Frobenius^2 (A,B)", num(r.frobenius_sq_ab)),
        ("Frobenius gap", num(r.frobenius_gap)),
        ("largest eps allowed", num(r.forward_bound)),
        ("quasiorthogonal", r.quasiorthogonal.to_string()),
        ("forward bound", verdict(r.forward_bound_ok)),
        ("converse bound", verdict(r.converse_bound_ok)),
        ("converse via A on B", verdict(r.converse_a_privatizes_b_ok)),
        ("converse via B on A", verdict(r.converse_b_privatizes_a_ok)),
        ("inputs validated", r.validated.to_string()),
        ("tol", num(r.tol)),
    ])
}

pub fn analyze(path_a: &Path, path_b: &Path, tol: f64) -> Result<Outcome, CliError> {
    let spec_a: AlgebraSpec = read_json(path_a)?;
    let spec_b: AlgebraSpec = read_json(path_b)?;
    let a = algebra::build(&spec_a)?;
    let b = algebra::build(&spec_b)?;
    let report = privacy::analyze(&a, &b, tol)?;
    Outcome::new(&report, render_orthogonality(&report), 0)
}

pub fn example(name: ExampleName, delta: Option<f64>, dim: Option<usize>, tol: f64) -> Result<Outcome, CliError> {
    let case = match name {
        ExampleName::Mub => {
            if delta.is_some() {
                return Err(CliError::usage("--delta does not apply to the mub example"));
            }
            ExampleCase::mub(dim.ok_or_else(|| CliError::usage("the mub example needs --dim"))?)
        }
        ExampleName::Hybrid | ExampleName::Subsystem => {
            if dim.is_some() {
                return Err(CliError::usage(format!("--dim does not apply to the {name} example")));
            }
            let delta = delta.ok_or_else(|| CliError::usage(format!("the {name} example needs --delta")))?;
            if name == ExampleName::Hybrid {
                ExampleCase::hybrid(delta)
            } else {
                ExampleCase::subsystem(delta)
            }
        }
    };
    let report = paperlab::evaluate_example(&case, tol)?;
    let text = render_example(&report);
    Outcome::new(&report, text, if report.matches { 0 } else { 1 })
}

fn render_example(r: &ExampleReport) -> String {
    let mut out = table(&[
        ("example", r.name.to_string()),
        ("delta", r.delta.to_string()),
        ("n", r.n.to_string()),
        ("computed Q", num(r.computed_q)),
        ("expected Q", num(r.expected_q)),
        ("abs diff", num(r.abs_diff)),
        ("rel diff", num(r.rel_diff)),
        ("match", verdict(r.matches)),
        ("perturbed system is an algebra", r.c_is_algebra.to_string()),
    ]);
    out.push('\n');
    out.push_str(&render_orthogonality(&r.analysis));
    out
}

pub fn trials(
    n: Option<usize>,
    path_a: &Path,
    path_b: &Path,
    seed: u64,
    count: usize,
    tol: f64,
) -> Result<Outcome, CliError> {
    let spec_a: AlgebraSpec = read_json(path_a)?;
    let spec_b: AlgebraSpec = read_json(path_b)?;
    let cfg = TrialConfig { n: n.unwrap_or(spec_a.n), spec_a, spec_b, seed, count, tol };
    let report = paperlab::run_trials(&cfg)?;
    let text = render_trials(&report);
    Outcome::new(&report, text, if report.passed() { 0 } else { 1 })
}

fn render_trials(r: &TrialReport) -> String {
    let mut out = table(&[
        ("n", r.n.to_string()),
        ("dim A / dim B", format!("{} / {}", r.dim_a, r.dim_b)),
        ("seed", r.seed.to_string()),
        ("trials", r.count.to_string()),
        ("Q min", num(r.q_min)),
        ("Q max", num(r.q_max)),
        ("Q mean", num(r.q_mean)),
        ("max route spread", num(r.max_route_spread)),
        ("max Frobenius gap", num(r.max_frobenius_gap)),
        ("forward violations", r.forward_violations.to_string()),
        ("converse violations", r.converse_violations.to_string()),
        ("consistency violations", r.consistency_violations.to_string()),
    ]);
    for v in &r.violations {
        let _ = writeln!(
            out,
            "violation: trial {} seed {} q {} eps {} / {} bound {}",
            v.trial,
            v.seed,
            num(v.q),
            num(v.eps_a_privatizes_b),
            num(v.eps_b_privatizes_a),
            num(v.forward_bound)
        );
    }
    let _ = writeln!(out, "result: {}", if r.passed() { "pass" } else { "FAIL" });
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MubReport {
    pub n: usize,
    pub bases: usize,
    pub prime: Option<usize>,
    pub epsilon: f64,
    pub epsilon_mean: f64,
    pub pairwise_q: Vec<Vec<f64>>,
}

pub fn mub(path: Option<&Path>, prime: Option<usize>) -> Result<Outcome, CliError> {
    let family: BasisFamily = match (path, prime) {
        (Some(p), None) => {
            let f: BasisFamily = read_json(p)?;
            f.check()?;
            f
        }
        (None, Some(p)) => mub::mub_family_prime(p)?,
        _ => return Err(CliError::usage("give either a family file or --prime")),
    };
    let report = MubReport {
        n: family.n,
        bases: family.len(),
        prime,
        epsilon: mub::unbiasedness_epsilon(&family)?,
        epsilon_mean: mub::unbiasedness_epsilon_mean(&family)?,
        pairwise_q: mub::pairwise_q(&family)?,
    };
    let mut text = table(&[
        ("n", report.n.to_string()),
        ("bases", report.bases.to_string()),
        ("epsilon (max)", num(report.epsilon)),
        ("epsilon (mean)", num(report.epsilon_mean)),
    ]);
    text.push_str("pairwise Q:\n");
    for row in &report.pairwise_q {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>12.9}")).collect();
        let _ = writeln!(text, "  {}", cells.join(" "));
    }
    Outcome::new(&report, text, 0)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ValidateOutput {
    pub kind: String,
    pub passed: bool,
    pub report: ValidationReport,
}

pub fn validate(path: &Path) -> Result<Outcome, CliError> {
    let spec: AlgebraSpec = read_json(path)?;
    let (kind, report) = match &spec.kind {
        // Spans are reported residual by residual instead of stopping at the first failure.
        SpecKind::Span(mats) => ("span", algebra::span_report(spec.n, mats)?),
        other => {
            let kind = match other {
                SpecKind::Generators(_) => "generators",
                SpecKind::Blocks(_) => "blocks",
                SpecKind::Masa(_) => "masa",
                SpecKind::Conjugated { .. } => "conjugated",
                SpecKind::Span(_) => unreachable!(),
            };
            (kind, algebra::validate(&algebra::build(&spec)?))
        }
    };
    let mut rows = vec![("kind", kind.to_string()), ("n", report.n.to_string()), ("dim", report.dim.to_string())];
    for (name, value) in report.residuals() {
        rows.push((name, format!("{}  {}", num(value), verdict(value <= report.tolerance))));
    }
    rows.push(("tolerance", num(report.tolerance)));
    rows.push(("result", if report.passed { "pass".into() } else { "FAIL".into() }));
    let out = ValidateOutput { kind: kind.into(), passed: report.passed, report };
    let exit = if out.passed { 0 } else { 1 };
    Outcome::new(&out, table(&rows), exit)
}
