mod phase;
mod scenario;
mod simulate;
mod speed;
mod sweep;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sgg",
    version,
    about = "Traveling waves of cells in self-generated gradients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write snapshots and a run report.
    Simulate(simulate::Args),
    /// Print a closed-form wave speed as JSON.
    Speed(speed::Args),
    /// Fit wave speeds over a list of parameter values.
    Sweep(sweep::Args),
    /// Write the simulated phase portrait next to the closed-form curves.
    PhasePlane(phase::Args),
}

/// How a command ended, mapped onto the process exit status.
pub enum Outcome {
    Expected,
    Unexpected,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate::run(a),
        Command::Speed(a) => speed::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::PhasePlane(a) => phase::run(a),
    };
    match result {
        Ok(Outcome::Expected) => ExitCode::SUCCESS,
        Ok(Outcome::Unexpected) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
