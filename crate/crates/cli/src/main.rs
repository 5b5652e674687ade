//! `srbm`: classify reflected Brownian motions from JSON problem files.
//!
//! Exit codes: 0 positive recurrent (or success), 10 not positive recurrent,
//! 2 input error, 3 indeterminate at float tolerance, 1 anything else.

mod commands;
mod error;
mod problem;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;
use srbm_core::{Decision, SimConfig};

use commands::{FluidArgs, SimArgs};
use error::{CliError, EXIT_NOT_POSITIVE_RECURRENT, EXIT_POSITIVE_RECURRENT};
use problem::{parse_problem, Problem};

#[derive(Parser, Debug)]
#[command(name = "srbm", version, about = "Positive recurrence of reflected Brownian motions in the orthant")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide positive recurrence and print the verdict with its certificate.
    Classify { problem: PathBuf },
    /// List every solution of the LCP with its category.
    Lcp { problem: PathBuf },
    /// Spiral membership and single-cycle gain of the normalized data.
    Spiral { problem: PathBuf },
    /// Trace the piecewise-linear fluid path.
    Fluid {
        problem: PathBuf,
        /// Start state, comma separated (default: all ones).
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        max_breakpoints: usize,
        #[arg(long, default_value_t = 1e6)]
        horizon: f64,
        /// Write breakpoints as CSV.
        #[arg(long)]
        trace_csv: Option<PathBuf>,
    },
    /// Monte Carlo hitting-time estimate; the CSV trace is path 0.
    Simulate {
        problem: PathBuf,
        /// Start state, comma separated (default: all ones).
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<String>,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 100.0)]
        horizon: f64,
        #[arg(long, default_value_t = 200)]
        paths: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
        /// Record every n-th step in the CSV trace.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long)]
        trace_csv: Option<PathBuf>,
    },
    /// Show the drift and column scalings and the canonical data.
    Normalize { problem: PathBuf },
}

fn load(path: &PathBuf) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text)
}

fn print(doc: &Value) {
    println!("{}", serde_json::to_string_pretty(doc).expect("JSON values serialize"));
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let doc = match &cli.command {
        Command::Classify { problem } => {
            let (doc, decision) = match load(problem)? {
                Problem::Exact(d) => commands::classify_doc(&d)?,
                Problem::Float(d) => commands::classify_doc(&d)?,
            };
            print(&doc);
            return Ok(match decision {
                Decision::PositiveRecurrent => EXIT_POSITIVE_RECURRENT,
                Decision::NotPositiveRecurrent => EXIT_NOT_POSITIVE_RECURRENT,
            });
        }
        Command::Lcp { problem } => match load(problem)? {
            Problem::Exact(d) => commands::lcp_doc(&d)?,
            Problem::Float(d) => commands::lcp_doc(&d)?,
        },
        Command::Spiral { problem } => match load(problem)? {
            Problem::Exact(d) => commands::spiral_doc(&d)?,
            Problem::Float(d) => commands::spiral_doc(&d)?,
        },
        Command::Normalize { problem } => match load(problem)? {
            Problem::Exact(d) => commands::normalize_doc(&d),
            Problem::Float(d) => commands::normalize_doc(&d),
        },
        Command::Fluid {
            problem,
            z0,
            max_breakpoints,
            horizon,
            trace_csv,
        } => {
            let args = FluidArgs {
                z0: z0.as_deref(),
                max_breakpoints: *max_breakpoints,
                horizon: *horizon,
                trace_csv: trace_csv.as_deref(),
            };
            match load(problem)? {
                Problem::Exact(d) => commands::fluid_doc(&d, &args)?,
                Problem::Float(d) => commands::fluid_doc(&d, &args)?,
            }
        }
        Command::Simulate {
            problem,
            z0,
            dt,
            horizon,
            paths,
            seed,
            radius,
            stride,
            trace_csv,
        } => {
            let args = SimArgs {
                z0: z0.as_deref(),
                config: SimConfig {
                    dt: *dt,
                    horizon: *horizon,
                    seed: *seed,
                    n_paths: *paths,
                    hitting_radius: *radius,
                    record_stride: *stride,
                },
                trace_csv: trace_csv.as_deref(),
            };
            commands::simulate_doc(&load(problem)?.to_f64(), &args)?
        }
    };
    print(&doc);
    Ok(EXIT_POSITIVE_RECURRENT)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => e.report(),
    }
}
