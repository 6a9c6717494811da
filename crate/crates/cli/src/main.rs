//! `bridge-stop`: thresholds, values, Monte Carlo and verification for the
//! double stopping problems of a Brownian bridge.

mod commands;
mod config;
mod figures;
mod output;

use clap::{Parser, Subcommand};
use config::{Flags, RunConfig};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bridge-stop",
    version,
    about = "Optimal double stopping of a Brownian bridge"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the boundary constants of a problem.
    Thresholds(Flags),
    /// Evaluate the value function at (t, x).
    Value(Flags),
    /// Monte Carlo estimate of the optimal strategy.
    Simulate {
        #[command(flatten)]
        flags: Flags,
        /// Also run on a grid with every interval halved, on the same paths.
        #[arg(long)]
        refine: bool,
    },
    /// Run the numerical checks of the optimality conditions.
    Verify(Flags),
    /// Write the figure data as CSV files.
    Figures(Flags),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error[E_USAGE]: {line}");
            return ExitCode::from(2);
        }
    };
    let (flags, refine) = match &cli.command {
        Command::Thresholds(f) | Command::Value(f) | Command::Verify(f) | Command::Figures(f) => (f, false),
        Command::Simulate { flags, refine } => (flags, *refine),
    };
    let result = RunConfig::resolve(flags).and_then(|cfg| match &cli.command {
        Command::Thresholds(_) => commands::thresholds(&cfg),
        Command::Value(_) => commands::value(&cfg),
        Command::Simulate { .. } => commands::simulate(&cfg, refine),
        Command::Verify(_) => commands::verify(&cfg),
        Command::Figures(_) => commands::figures(&cfg),
    });
    match result {
        Ok(outcome) => {
            println!("{}", outcome.stdout);
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("error[E_CHECK]: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.to_string().replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
