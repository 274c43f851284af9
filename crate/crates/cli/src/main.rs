//! `skewbox` command-line tool.
//!
//! Exit status: 0 on success, 1 for usage, input or configuration errors,
//! 2 when the command ran but part of the work failed (a group that could
//! not be summarised, a failed simulation cell, a failed self-check).

mod input;
mod render;
mod sepd_check;
mod simulate;
mod summarise;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "skewbox", version, about = "Skewness-aware boxplot fences and outlier simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-group boxplot statistics and outliers from a CSV file.
    Summarise(summarise::Args),
    /// Monte Carlo swamping or masking rates over an (alpha, p) grid.
    Simulate(simulate::Args),
    /// Render a summary table or a simulation table as SVG.
    Render(render::Args),
    /// Check the SEPD normaliser, quantile function and sampler.
    SepdCheck(sepd_check::Args),
}

/// How a command finished when it did not fail outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Partial,
}

pub type CmdResult = Result<Outcome, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Summarise(args) => summarise::run(&args),
        Command::Simulate(args) => simulate::run(&args),
        Command::Render(args) => render::run(&args),
        Command::SepdCheck(args) => sepd_check::run(&args),
    };
    match result {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
