mod common;

use common::{antidiagonal_spec, path_str, run, write_json};
use quasiortho::algebra::AlgebraSpec;
use quasiortho::mub::{fourier_basis, standard_basis, BasisFamily};
use quasiortho::paperlab::{ExampleReport, TrialReport};
use quasiortho::privacy::OrthogonalityReport;
use quasiortho::{CMatrix, CVector};
use serde_json::Value;

fn blocks22() -> AlgebraSpec {
    AlgebraSpec::blocks(vec![2, 2])
}

#[test]
fn analyze_quasiorthogonal_pair() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", &blocks22());
    let b = write_json(dir.path(), "b.json", &antidiagonal_spec());
    let r = run(&["analyze", path_str(&a), path_str(&b), "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report: OrthogonalityReport = serde_json::from_str(&r.stdout).unwrap();
    assert!((report.q - 1.0).abs() < 1e-12);
    assert!(report.quasiorthogonal);
    assert!(report.forward_bound_ok && report.converse_bound_ok);
}

#[test]
fn analyze_does_not_fail_on_non_quasiorthogonal_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", &blocks22());
    let r = run(&["--format", "json", "analyze", path_str(&a), path_str(&a)]);
    assert_eq!(r.code, 0);
    let report: OrthogonalityReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(!report.quasiorthogonal);
    assert!((report.q - 8.0).abs() < 1e-8);
}

#[test]
fn analyze_rejects_non_algebra_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", &AlgebraSpec::full(2));
    let bad = write_json(dir.path(), "bad.json", &AlgebraSpec::span(2, vec![CMatrix::unit(2, 0, 1)]));
    let r = run(&["--format", "json", "analyze", path_str(&a), path_str(&bad)]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.is_empty());
    let err: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "NotAnAlgebraError");
    assert_eq!(err["exit_code"], 1);
}

#[test]
fn analyze_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let b = write_json(dir.path(), "b.json", &blocks22());
    let missing = dir.path().join("missing.json");
    let r = run(&["--format", "json", "analyze", path_str(&missing), path_str(&b)]);
    assert_eq!(r.code, 2);
    let err: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "IoError");

    let typo = dir.path().join("typo.json");
    std::fs::write(&typo, r#"{"n": 4, "kind": "blocks", "blocks": [2, 2], "blokcs": 1}"#).unwrap();
    assert_eq!(run(&["analyze", path_str(&typo), path_str(&b)]).code, 2);

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(run(&["analyze", path_str(&garbage), path_str(&b)]).code, 2);

    // Mismatched ambient dimensions.
    let small = write_json(dir.path(), "small.json", &AlgebraSpec::full(2));
    assert_eq!(run(&["analyze", path_str(&small), path_str(&b)]).code, 2);

    assert_eq!(run(&["analyze", path_str(&b)]).code, 2);
    assert_eq!(run(&["--tol", "-1", "analyze", path_str(&b), path_str(&b)]).code, 2);
}

#[test]
fn text_format_is_readable() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", &blocks22());
    let b = write_json(dir.path(), "b.json", &antidiagonal_spec());
    let r = run(&["analyze", path_str(&a), path_str(&b)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("quasiorthogonal") && r.stdout.contains("true"));
    let r = run(&["analyze", path_str(&a), path_str(&dir.path().join("nope.json"))]);
    assert!(r.stderr.starts_with("error [IoError]"));
}

#[test]
fn example_subsystem() {
    for delta in ["0", "0.1"] {
        let r = run(&["example", "subsystem", "--delta", delta, "--format", "json"]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        let report: ExampleReport = serde_json::from_str(&r.stdout).unwrap();
        assert!(report.matches);
        if delta == "0" {
            assert!((report.computed_q - 1.0).abs() < 1e-10);
            assert!(report.c_is_algebra);
        }
    }
}

#[test]
fn example_hybrid_unperturbed() {
    let r = run(&["example", "hybrid", "--delta", "0", "--format", "json"]);
    assert_eq!(r.code, 0);
    let report: ExampleReport = serde_json::from_str(&r.stdout).unwrap();
    assert!((report.computed_q - 1.0).abs() < 1e-12);
}

#[test]
fn example_mub() {
    let r = run(&["example", "mub", "--dim", "6", "--format", "json"]);
    assert_eq!(r.code, 0);
    let report: ExampleReport = serde_json::from_str(&r.stdout).unwrap();
    assert!((report.computed_q - 1.0).abs() < 1e-9);
    assert_eq!(report.n, 6);
}

#[test]
fn example_argument_errors() {
    assert_eq!(run(&["example", "hybrid", "--delta", "-0.1"]).code, 2);
    assert_eq!(run(&["example", "hybrid"]).code, 2);
    assert_eq!(run(&["example", "hybrid", "--delta", "0", "--dim", "4"]).code, 2);
    assert_eq!(run(&["example", "mub", "--dim", "1"]).code, 2);
    assert_eq!(run(&["example", "mub"]).code, 2);
    assert_eq!(run(&["example", "nonsense", "--delta", "0"]).code, 2);
}

#[test]
fn trials_pass_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", &blocks22());
    let b = write_json(dir.path(), "b.json", &antidiagonal_spec());
    let args = ["trials", "--n", "4", "--spec-a", path_str(&a), "--spec-b", path_str(&b)];
    let run_with = |seed: &str| {
        let mut v = args.to_vec();
        v.extend(["--count", "100", "--seed", seed, "--format", "json"]);
        run(&v)
    };
    let first = run_with("7");
    assert_eq!(first.code, 0, "{}", first.stderr);
    let report: TrialReport = serde_json::from_str(&first.stdout).unwrap();
    assert!(report.passed());
    assert_eq!(report.count, 100);
    assert_eq!(run_with("7").stdout, first.stdout);
    assert_ne!(run_with("8").stdout, first.stdout);
}

#[test]
fn trials_are_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", &AlgebraSpec::blocks(vec![1, 2]));
    let b = write_json(dir.path(), "b.json", &AlgebraSpec::blocks(vec![1, 1, 1]));
    let args = ["--format", "json", "trials", "--spec-a", path_str(&a), "--spec-b", path_str(&b), "--count", "30"];
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_quasiortho"))
            .args(args)
            .env("THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        outputs.push(out.stdout);
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn trials_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", &blocks22());
    let pa = path_str(&a);
    assert_eq!(run(&["trials", "--spec-a", pa, "--spec-b", pa, "--count", "0"]).code, 2);
    assert_eq!(run(&["trials", "--n", "3", "--spec-a", pa, "--spec-b", pa]).code, 2);
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_quasiortho"))
        .args(["trials", "--spec-a", pa, "--spec-b", pa, "--count", "1"])
        .env("THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mub_prime_family() {
    let r = run(&["mub", "--prime", "3", "--format", "json"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert!(v["epsilon"].as_f64().unwrap().abs() < 1e-9);
    let q = v["pairwise_q"].as_array().unwrap();
    assert_eq!(q.len(), 4);
    for (k, row) in q.iter().enumerate() {
        for (l, x) in row.as_array().unwrap().iter().enumerate() {
            let target = if k == l { 3.0 } else { 1.0 };
            assert!((x.as_f64().unwrap() - target).abs() < 1e-8);
        }
    }
    assert_eq!(run(&["mub", "--prime", "4"]).code, 2);
    assert_eq!(run(&["mub"]).code, 2);
}

#[test]
fn mub_family_files() {
    let dir = tempfile::tempdir().unwrap();
    let dup = BasisFamily { n: 3, bases: vec![standard_basis(3), standard_basis(3)] };
    let p = write_json(dir.path(), "dup.json", &dup);
    let r = run(&["mub", path_str(&p), "--format", "json"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert!((v["epsilon"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let pair = BasisFamily { n: 4, bases: vec![standard_basis(4), fourier_basis(4)] };
    let p = write_json(dir.path(), "pair.json", &pair);
    assert_eq!(run(&["mub", path_str(&p)]).code, 0);

    let skew = vec![CVector::basis(2, 0), CVector::basis(2, 0)];
    let bad = BasisFamily { n: 2, bases: vec![standard_basis(2), skew] };
    let p = write_json(dir.path(), "bad.json", &bad);
    let r = run(&["mub", path_str(&p), "--format", "json"]);
    assert_eq!(r.code, 1);
    let err: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "BasisError");

    let p = dir.path().join("broken.json");
    std::fs::write(&p, r#"{"n": 2}"#).unwrap();
    assert_eq!(run(&["mub", path_str(&p)]).code, 2);
}

#[test]
fn validate_command() {
    let dir = tempfile::tempdir().unwrap();
    let full = write_json(dir.path(), "full.json", &AlgebraSpec::full(4));
    let r = run(&["validate", path_str(&full), "--format", "json"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["passed"], true);

    let e12 = write_json(dir.path(), "e12.json", &AlgebraSpec::span(2, vec![CMatrix::unit(2, 0, 1)]));
    let r = run(&["validate", path_str(&e12), "--format", "json"]);
    assert_eq!(r.code, 1);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert!(v["report"]["star_closure"].as_f64().unwrap() > 0.5);
    assert!(v["report"]["unitality"].as_f64().unwrap() > 0.5);
    let text = run(&["validate", path_str(&e12)]);
    assert!(text.stdout.contains("star_closure") && text.stdout.contains("FAIL"));

    let skew = AlgebraSpec::masa(2, vec![CVector::basis(2, 0), CVector::basis(2, 0)]);
    let p = write_json(dir.path(), "skew.json", &skew);
    let r = run(&["validate", path_str(&p), "--format", "json"]);
    assert_eq!(r.code, 1);
    let err: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "BasisError");

    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"n": 2, "kind": "masa"}"#).unwrap();
    assert_eq!(run(&["validate", path_str(&p)]).code, 2);
}

#[test]
fn json_reports_round_trip_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", &blocks22());
    let b = write_json(dir.path(), "b.json", &AlgebraSpec::conjugated(quasiortho::linalg::haar_unitary(4, 3), antidiagonal_spec()));
    let r = run(&["--format", "json", "analyze", path_str(&a), path_str(&b)]);
    let report: OrthogonalityReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", r.stdout);

    let r = run(&["--format", "json", "example", "subsystem", "--delta", "0.05"]);
    let report: ExampleReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", r.stdout);

    let r = run(&["--format", "json", "trials", "--spec-a", path_str(&a), "--spec-b", path_str(&b), "--count", "5"]);
    let report: TrialReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", r.stdout);
}
