use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use epitv::commands::{self, FitOverrides, SweepOptions};

#[derive(Parser)]
#[command(name = "epitv", version, about = "Simulate SIR/SIRQ epidemics and recover their time-varying rates from noisy evidence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scenario bundle (dataset, truth paths, trajectory, provenance)
    Simulate {
        /// Scenario name: constant-sirq, tv-sir, or tv-sirq
        #[arg(long)]
        scenario: String,
        /// RNG seed (defaults to the scenario's pinned seed)
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a model to a dataset as described by a JSON config
    Fit {
        /// Fit config JSON path
        #[arg(long)]
        config: PathBuf,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Override the config seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of starts
        #[arg(long)]
        starts: Option<usize>,
        /// Override the restart cap
        #[arg(long)]
        max_restarts: Option<usize>,
    },
    /// Run one built-in experiment end to end and judge recovery
    Reproduce {
        /// Experiment name: constant-sirq, tv-sir, or tv-sirq
        experiment: String,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Override the pinned seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fit a scenario once per regularization weight and classify regimes
    LambdaSweep {
        /// Scenario name (needs a time-varying rate): tv-sir or tv-sirq
        #[arg(long)]
        scenario: String,
        /// Strictly increasing positive weights, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<f64>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Override the scenario seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of starts
        #[arg(long)]
        starts: Option<usize>,
        /// Override the restart cap
        #[arg(long)]
        max_restarts: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { scenario, seed, out } => commands::simulate(&scenario, seed, &out),
        Command::Fit {
            config,
            out,
            seed,
            starts,
            max_restarts,
        } => commands::fit(
            &config,
            &out,
            FitOverrides {
                seed,
                starts,
                max_restarts,
                max_evals: None,
            },
        ),
        Command::Reproduce { experiment, out, seed } => {
            commands::reproduce(&experiment, &out, seed).map(|_| ())
        }
        Command::LambdaSweep {
            scenario,
            lambda,
            out,
            seed,
            starts,
            max_restarts,
        } => commands::lambda_sweep(&SweepOptions {
            scenario,
            lambdas: lambda,
            out,
            overrides: FitOverrides {
                seed,
                starts,
                max_restarts,
                max_evals: None,
            },
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
