use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use evoflow_cli::{list_scenarios, parse_config, run_scenario, RunError};

#[derive(Parser)]
#[command(name = "evoflow", about = "Gas-dynamics scenarios with evolutionary-form diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run {
        config: PathBuf,
        /// Exit with status 4 when an acceptance check fails.
        #[arg(long)]
        check: bool,
        /// Output directory.
        #[arg(long, env = "EVOFLOW_OUT", default_value = "evoflow-out")]
        out: PathBuf,
    },
    /// List the scenario catalogue.
    List,
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for (name, description) in list_scenarios() {
                println!("{name:<22}{description}");
            }
            ExitCode::SUCCESS
        }
        Command::Version => {
            println!("evoflow {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
        Command::Run { config, check, out } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            let parsed = match parse_config(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            match run_scenario(&parsed, &out) {
                Ok(report) => {
                    print!("{}", report.to_text());
                    if check && !report.passed() {
                        eprintln!("error: acceptance check failed");
                        return ExitCode::from(4);
                    }
                    ExitCode::SUCCESS
                }
                Err(e @ RunError::Numerical { .. }) => {
                    eprintln!("error: {e}");
                    ExitCode::from(3)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
