#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use quasiortho::algebra::AlgebraSpec;
use quasiortho::CMatrix;
use serde::Serialize;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_quasiortho")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// `span{I_4, [[0, σx], [σx, 0]]}`.
pub fn antidiagonal_spec() -> AlgebraSpec {
    let k = CMatrix::from_real(&[
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0],
    ]);
    AlgebraSpec::span(4, vec![CMatrix::identity(4), k])
}
