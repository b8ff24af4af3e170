//! `cvwitness` — analyze two-mode states with the EPR-like entanglement
//! witness, sweep family parameter grids to CSV, and verify both moment
//! engines against closed-form values.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on
//! usage or domain errors. Errors print a machine-readable JSON object
//! `{"error":{"kind":…,"message":…}}` to stdout.

mod families;
mod json;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvwitness_core::{assess, TruncationPolicy};

use families::{EngineArgs, Family, ParamArgs};

#[derive(Debug, Parser)]
#[command(name = "cvwitness", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assess one state and print the witness report as JSON.
    Analyze(AnalyzeArgs),
    /// Evaluate the witness over a parameter grid and write CSV.
    Sweep(sweep::SweepArgs),
    /// Compare both engines against every stored closed-form value.
    Verify(verify::VerifyArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// State family to analyze.
    #[arg(long, value_enum)]
    family: Family,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Also write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

/// CLI failure: either bad usage/arguments or an error bubbling up from
/// the core crate. Both map to exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(cvwitness_core::Error),
    Io(std::io::Error),
}

impl From<cvwitness_core::Error> for CliError {
    fn from(e: cvwitness_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Usage(format!("csv: {other:?}")),
        }
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Core(e) => match e {
                cvwitness_core::Error::Domain(_) => "domain",
                cvwitness_core::Error::TruncationLoss { .. } => "truncation-loss",
                cvwitness_core::Error::Weight(_) => "weight",
                cvwitness_core::Error::ShapeMismatch(..) => "shape-mismatch",
                cvwitness_core::Error::DegenerateMode { .. } => "degenerate-mode",
                cvwitness_core::Error::DegenerateNorm(_) => "degenerate-norm",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(msg) => msg.clone(),
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
        }
    }

    fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind(), "message": self.message() }
        })
        .to_string()
    }
}

fn run_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let policy = TruncationPolicy::new(args.engine.tail_tol, args.engine.max_cutoff)?;
    let evaluated =
        families::evaluate_args(args.family, &args.params, args.engine.engine, &policy)?;
    let report = assess(&evaluated.moments);
    let text = json::report_document(&evaluated, &report).to_string();
    println!("{text}");
    if let Some(path) = &args.json {
        std::fs::write(path, format!("{text}\n"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(args) => run_analyze(args).map(|()| ExitCode::SUCCESS),
        Command::Sweep(args) => sweep::run(args).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => verify::run(args).map(|all_passed| {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(error) => {
            println!("{}", error.to_json());
            ExitCode::from(2)
        }
    }
}
