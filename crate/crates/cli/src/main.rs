use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use socnav::sim::Mode;
use socnav_cli::commands::{self, default_lambda, print_demo, CliError};

#[derive(Parser)]
#[command(name = "socnav", version, about = "Context-aware social navigation in simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario in one mode.
    Run {
        /// Scenario file, or the name of a bundled scenario.
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "paccet")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Dotted `key=value` applied to the scenario before validation.
        #[arg(long = "config-override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run a scenario in both modes and compare.
    Compare {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "config-override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Fit the context classifier on a labeled CSV and write it as JSON.
    TrainContext {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = default_lambda())]
        lambda: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        holdout: usize,
    },
    /// Emit the synthetic labeled feature dataset as CSV.
    GenDataset {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        per_label: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Show how the Pareto selector and weighted sums treat a concave front.
    PaccetDemo {
        /// Also write the table as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Run { scenario, mode, seed, out, overrides } => commands::cmd_run(&commands::RunArgs {
            scenario,
            mode,
            seed,
            out,
            overrides,
        }),
        Command::Compare { scenario, seed, out, overrides } => {
            commands::cmd_compare(&commands::CompareArgs { scenario, seed, out, overrides })
        }
        Command::TrainContext { data, out, lambda, seed, holdout } => {
            let s = commands::cmd_train_context(&commands::TrainArgs { data, out, lambda, seed, holdout })?;
            println!("{}", serde_json::to_string_pretty(&s).expect("summary serializes"));
            Ok(commands::EXIT_OK)
        }
        Command::GenDataset { seed, per_label, out } => {
            let n = commands::cmd_gen_dataset(seed, per_label, out.as_deref())?;
            if out.is_some() {
                eprintln!("wrote {n} samples");
            }
            Ok(commands::EXIT_OK)
        }
        Command::PaccetDemo { out } => {
            let table = commands::paccet_demo();
            print_demo(&table, std::io::stdout().lock()).map_err(|e| CliError::Other(e.into()))?;
            if let Some(p) = out {
                let json = serde_json::to_string_pretty(&table).expect("demo serializes") + "\n";
                std::fs::write(&p, json).map_err(|e| CliError::Other(e.into()))?;
            }
            Ok(commands::EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
