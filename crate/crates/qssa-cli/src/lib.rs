//! Command-line front end for the `qssa` library.
//!
//! [`run`] parses an argument vector, dispatches to a subcommand and returns
//! the process exit code: 0 on success, 1 on a runtime error (reported as one
//! JSON line on stderr) and 2 on a usage error.

mod args;
mod commands;
mod error;
mod fit;
mod output;
mod records;
mod sweep;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "qssa",
    version,
    about = "Michaelis-Menten kinetics and its quasi-steady-state reductions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derived constants, dimensionless groups, timescales and regime verdicts
    Constants(commands::ConstantsArgs),
    /// Integrate the mass-action system; CSV t,s,c,p,e
    Simulate(commands::SimulateArgs),
    /// Compare one reduced model with mass action
    Reduce(commands::ReduceArgs),
    /// Nullclines, a phase-plane trajectory and the critical set
    Phase(commands::PhaseArgs),
    /// Error envelopes checked along a reference trajectory
    Bounds(commands::BoundsArgs),
    /// Data behind a reference figure
    Figure(commands::FigureArgs),
    /// Fit a reduced model to a product progress curve
    Fit(fit::FitArgs),
    /// Evaluate quantities over a parameter grid
    Sweep(sweep::SweepArgs),
}

fn dispatch(cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::Constants(a) => commands::constants(a),
        Command::Simulate(a) => commands::simulate_cmd(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::Phase(a) => commands::phase(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Figure(a) => commands::figure(a),
        Command::Fit(a) => fit::fit_cmd(a),
        Command::Sweep(a) => sweep::sweep(a),
    }
}

/// One-line machine-readable error for stderr.
pub fn error_line(err: &CliError) -> String {
    serde_json::json!({ "error": err.kind(), "message": err.to_string() }).to_string()
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version go to stdout with code 0, real errors to stderr with 2
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(err) => {
            if let CliError::Usage(msg) = &err {
                eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            } else {
                eprintln!("{}", error_line(&err));
            }
            err.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn error_line_is_single_line_json() {
        let line = error_line(&CliError::GridTooLarge { points: 5, cap: 2 });
        assert!(!line.contains('\n'));
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["error"], "GridTooLarge");
    }
}
