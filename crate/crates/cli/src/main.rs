//! `trendspectra` command line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
//! Errors are a single stderr line prefixed `error[config]:` or `error[numerical]:`.

mod commands;
mod config;
mod io;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "trendspectra",
    version,
    about = "Trend filter weights, smoother spectra, perturbation bounds and cutoff design"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    shared: config::Shared,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symmetric and boundary filter weights, one row per filter.
    Weights,
    /// Analytic eigenvalues of the circulant or tau11 operator.
    Spectrum,
    /// Distance between the smoother matrix and the chosen algebra.
    Bound,
    /// Trend of the series in --input.
    Smooth,
    /// Smoother designed by eigenvalue cutoff, with diagnostics.
    Design,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl From<trendspectra::Error> for CliError {
    fn from(e: trendspectra::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = &cli.shared;
    match cli.command {
        Command::Weights => commands::weights(cfg),
        Command::Spectrum => commands::spectrum(cfg),
        Command::Bound => commands::bound(cfg),
        Command::Smooth => commands::smooth(cfg),
        Command::Design => commands::design(cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default();
            eprintln!(
                "error[config]: {}",
                single_line(first.trim_start_matches("error: "))
            );
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(m)) => {
            eprintln!("error[config]: {}", single_line(&m));
            ExitCode::from(1)
        }
        Err(CliError::Numerical(m)) => {
            eprintln!("error[numerical]: {}", single_line(&m));
            ExitCode::from(2)
        }
    }
}
