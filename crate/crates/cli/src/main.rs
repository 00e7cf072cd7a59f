//! Command-line front door: JSON problem files in, certificates and
//! reports out.
//!
//! Exit codes: 0 success, 1 mathematical failure (no decomposition /
//! not-unit / failed certificate), 2 input error, 3 budget exceeded.

mod commands;

use clap::{Parser, Subcommand};
use opkit::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "opkit", version, about = "Operator decomposition toolkit")]
pub struct Cli {
    /// Coefficient field: exact rationals or floating complex.
    #[arg(long, global = true, default_value = "exact", value_parser = ["exact", "float"])]
    mode: String,

    /// Floating-mode equality epsilon.
    #[arg(long, global = true, default_value_t = 1e-12)]
    epsilon: f64,

    /// Seed for randomized spot checks (kept for reproducible runs).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Term budget for Groebner-basis computations
    /// (env OPKIT_BUDGET overrides the default).
    #[arg(long)]
    budget_terms: Option<usize>,

    /// Render human-readable tables (CSV) instead of JSON.
    #[arg(long, global = true, default_value_t = false)]
    table: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition-of-unity certificate and projector report for a
    /// factored polynomial (optionally applied to an operator).
    Decompose { file: PathBuf },
    /// Reduce P u = f to factor problems, solve, and reconstruct.
    Solve { file: PathBuf },
    /// Build the Koszul complex of a commuting family and verify the
    /// complex/homotopy/exactness statements.
    Koszul { file: PathBuf },
    /// Groebner unit-ideal certificates for polynomial factor systems.
    Certify { file: PathBuf },
    /// GJMS coefficients, factored forms, null space and order-reduction
    /// solve on a diagonal spectral model.
    Gjms { file: PathBuf },
    /// Re-validate an emitted certificate file.
    Verify { file: PathBuf },
}

impl Cli {
    pub fn budget(&self) -> usize {
        self.budget_terms
            .or_else(|| {
                std::env::var("OPKIT_BUDGET")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(1_000_000)
    }

    pub fn is_float(&self) -> bool {
        self.mode == "float"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Decompose { file } => commands::decompose(&cli, file),
        Command::Solve { file } => commands::solve(&cli, file),
        Command::Koszul { file } => commands::koszul(&cli, file),
        Command::Certify { file } => commands::certify(&cli, file),
        Command::Gjms { file } => commands::gjms(&cli, file),
        Command::Verify { file } => commands::verify(&cli, file),
    };
    match outcome {
        Ok(rendered) => {
            println!("{}", rendered);
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {}", err);
            match err {
                Error::Math(_) => ExitCode::from(1),
                Error::Input(_) => ExitCode::from(2),
                Error::Budget(_) => ExitCode::from(3),
            }
        }
    }
}
