use std::fmt::Write as _;
use std::io::Write as _;

use clap::ValueEnum;
use quasiortho::Error;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// A finished command: both renderings plus the exit code.
pub struct Outcome {
    pub text: String,
    pub json: String,
    pub exit: u8,
}

impl Outcome {
    pub fn new<T: Serialize>(value: &T, text: String, exit: u8) -> Result<Self, CliError> {
        let json = serde_json::to_string_pretty(value)
            .map_err(|e| CliError { exit: 1, kind: "SerializationError".into(), message: e.to_string() })?;
        Ok(Self { text, json, exit })
    }
}

#[derive(Debug, Serialize)]
pub struct CliError {
    #[serde(skip)]
    pub exit: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { exit: 2, kind: "UsageError".into(), message: message.into() }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self { exit: 2, kind: "IoError".into(), message: format!("{}: {err}", path.display()) }
    }

    pub fn parse(path: &std::path::Path, err: serde_json::Error) -> Self {
        Self { exit: 2, kind: "ParseError".into(), message: format!("{}: {err}", path.display()) }
    }
}

impl From<Error> for CliError {
    /// Malformed input is a usage error (2); everything else means the input was
    /// well formed but failed a mathematical check (1).
    fn from(err: Error) -> Self {
        let root = match &err {
            Error::Trial { source, .. } => source.as_ref(),
            other => other,
        };
        let exit = match root {
            Error::Input(_) | Error::Dimension(_) | Error::EmptyInput(_) => 2,
            _ => 1,
        };
        Self { exit, kind: err.kind().into(), message: err.to_string() }
    }
}

/// Writes the report to stdout. A closed pipe is not an error worth reporting.
pub fn emit(outcome: &Outcome, format: Format) {
    let mut stdout = std::io::stdout().lock();
    let _ = match format {
        Format::Text => write!(stdout, "{}", outcome.text),
        Format::Json => writeln!(stdout, "{}", outcome.json),
    };
    let _ = stdout.flush();
}

#[derive(Serialize)]
struct ErrorEnvelope<'a> {
    error: &'a CliError,
    exit_code: u8,
}

pub fn emit_error(err: &CliError, format: Format) {
    match format {
        Format::Text => eprintln!("error [{}]: {}", err.kind, err.message),
        Format::Json => {
            let envelope = ErrorEnvelope { error: err, exit_code: err.exit };
            eprintln!("{}", serde_json::to_string_pretty(&envelope).unwrap_or_else(|_| err.message.clone()));
        }
    }
}

/// Two-column `name  value` table.
pub fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

pub fn verdict(ok: bool) -> String {
    if ok { "ok" } else { "FAIL" }.to_string()
}
