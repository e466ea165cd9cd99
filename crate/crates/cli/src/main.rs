//! `fqa` — run feedback-based quantum optimization and state-preparation
//! trajectories from the command line and record them as CSV.

mod args;
mod commands;
mod instance;
mod output;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::FAILURE
        }
    }
}
