use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vancover_cli::bench::{cmd_bench, BenchCmd};
use vancover_cli::commands::{cmd_oracle, cmd_run, cmd_sweep, OracleCmd, RunCmd, SweepCmd};

const EXIT_USAGE: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "vancover",
    version,
    about = "Global minimization of non-Lipschitz functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem and write the result as JSON.
    Run(RunCmd),
    /// Repeat a solve over a list of eta or gamma values.
    Sweep(SweepCmd),
    /// Compare both solvers against reference results.
    Bench(BenchCmd),
    /// Brute-force grid minimum of a test problem.
    Oracle(OracleCmd),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Run(c) => cmd_run(c),
        Command::Sweep(c) => cmd_sweep(c),
        Command::Bench(c) => cmd_bench(c),
        Command::Oracle(c) => cmd_oracle(c),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
