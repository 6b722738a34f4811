//! `quasiortho`: orthogonality and privacy measures between matrix algebras.
//!
//! Exit codes: 0 success, 1 domain failure (invalid algebra, example mismatch,
//! bound violation), 2 usage, I/O or parse error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::output::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "quasiortho", version, about = "Orthogonality and relative privacy of matrix algebras")]
struct Cli {
    /// Output format. JSON goes to stdout; errors go to stderr in the same format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Tolerance for the quasiorthogonality and bound verdicts.
    #[arg(long, default_value_t = 1e-8, global = true)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure Q and both privacy norms for two algebra specs.
    Analyze { algebra_a: PathBuf, algebra_b: PathBuf },

    /// Reproduce one of the built-in examples against its closed form.
    Example {
        #[arg(value_enum)]
        name: ExampleArg,
        /// Perturbation size (hybrid, subsystem).
        #[arg(long)]
        delta: Option<f64>,
        /// Dimension (mub).
        #[arg(long)]
        dim: Option<usize>,
    },

    /// Check the bounds on randomly conjugated pairs.
    Trials {
        /// Ambient dimension; must match both specs. Defaults to theirs.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        spec_a: PathBuf,
        #[arg(long)]
        spec_b: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },

    /// Unbiasedness and pairwise Q for a family of bases.
    Mub {
        /// Basis family JSON file.
        #[arg(conflicts_with = "prime", required_unless_present = "prime")]
        family: Option<PathBuf>,
        /// Use the complete family for a prime dimension instead.
        #[arg(long)]
        prime: Option<usize>,
    },

    /// Print the axiom residuals of an algebra spec.
    Validate { algebra: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExampleArg {
    Hybrid,
    Subsystem,
    Mub,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::usage(format!("THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot configure thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<output::Outcome, CliError> {
    configure_threads()?;
    if !(cli.tol > 0.0) || !cli.tol.is_finite() {
        return Err(CliError::usage(format!("--tol must be positive and finite, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Analyze { algebra_a, algebra_b } => commands::analyze(algebra_a, algebra_b, cli.tol),
        Command::Example { name, delta, dim } => {
            let name = match name {
                ExampleArg::Hybrid => quasiortho::paperlab::ExampleName::Hybrid,
                ExampleArg::Subsystem => quasiortho::paperlab::ExampleName::Subsystem,
                ExampleArg::Mub => quasiortho::paperlab::ExampleName::Mub,
            };
            commands::example(name, *delta, *dim, cli.tol)
        }
        Command::Trials { n, spec_a, spec_b, seed, count } => {
            commands::trials(*n, spec_a, spec_b, *seed, *count, cli.tol)
        }
        Command::Mub { family, prime } => commands::mub(family.as_deref(), *prime),
        Command::Validate { algebra } => commands::validate(algebra),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            output::emit(&outcome, cli.format);
            ExitCode::from(outcome.exit)
        }
        Err(err) => {
            output::emit_error(&err, cli.format);
            ExitCode::from(err.exit)
        }
    }
}
