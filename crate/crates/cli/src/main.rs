//! `trafo-ens`: reproducible pipelines around transformation ensembles.
//!
//! Exit codes: 0 success, 2 invalid input or usage, 3 numerical failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "trafo-ens",
    version,
    about = "Ensembles of ordinal probabilistic predictions"
)]
pub struct Cli {
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format where a command supports several.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output path. Commands with two outputs take `a,b`.
    #[arg(long, global = true)]
    pub out: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct PanelInput {
    /// Panel file: `.json`, or long-form `.csv` together with `--outcomes`.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,

    /// Outcome table for CSV panels.
    #[arg(long)]
    pub outcomes: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a panel and report every violation.
    Validate {
        #[command(flatten)]
        panel: PanelInput,
    },
    /// Pool the members of a panel into one prediction per instance.
    Pool {
        #[command(flatten)]
        panel: PanelInput,
        /// linear | log-cdf | log-pdf | trafo:<logistic|normal|mev>
        #[arg(long)]
        pool: String,
        /// Weights JSON file, or `equal`.
        #[arg(long, default_value = "equal")]
        weights: String,
    },
    /// Tune ensemble weights on a validation panel.
    Tune {
        #[command(flatten)]
        panel: PanelInput,
        #[arg(long)]
        score: String,
        #[arg(long)]
        pool: String,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
    },
    /// Mean score of every member, and of an ensemble if `--pool` is given.
    Score {
        #[command(flatten)]
        panel: PanelInput,
        /// Comma-separated score kinds.
        #[arg(long, default_value = "nll")]
        score: String,
        #[arg(long)]
        pool: Option<String>,
        #[arg(long, default_value = "equal")]
        weights: String,
    },
    /// Evaluate ensembles next to the member average, with bootstrap
    /// intervals.
    Evaluate {
        #[command(flatten)]
        panel: PanelInput,
        /// Comma-separated pool kinds.
        #[arg(long, default_value = "linear,log-cdf,log-pdf,trafo:logistic")]
        pools: String,
        /// Comma-separated score kinds.
        #[arg(long, default_value = "nll,rps")]
        scores: String,
        #[arg(long, default_value = "equal")]
        weights: String,
        /// Bootstrap resamples.
        #[arg(long, default_value_t = 1000)]
        resamples: usize,
        /// Calibration bin CSV; defaults to `<out>.calibration.csv`.
        #[arg(long)]
        calibration_out: Option<PathBuf>,
    },
    /// Brute-force check of the minimax property of the logit (nll) or
    /// linear (rps) pool.
    MinimaxCheck {
        #[arg(long)]
        score: String,
        /// JSON array of event probabilities (nll) or three-class CDFs (rps).
        #[arg(long)]
        members: PathBuf,
        #[arg(long, default_value = "equal")]
        weights: String,
        #[arg(long, default_value_t = 0.001)]
        resolution: f64,
    },
    /// Simulate a tabular ordinal dataset.
    Simulate {
        #[arg(long, default_value = "utk-sim")]
        preset: String,
        #[arg(long)]
        n: usize,
    },
    /// Train toy transformation models and write their test-set panel and
    /// parameters.
    TrainToy {
        /// Dataset CSV as written by `simulate`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "si-ls")]
        spec: String,
        #[arg(long, default_value = "nll")]
        loss: String,
        #[arg(long, default_value_t = 5)]
        members: usize,
        #[arg(long, default_value = "logistic")]
        target: String,
        /// Train, validation and test sizes, e.g. `3000,1000,1000`.
        #[arg(long)]
        split: Option<String>,
        #[arg(long, default_value_t = 500)]
        epochs: usize,
        #[arg(long, default_value_t = 0.1)]
        learning_rate: f64,
    },
    /// Densities of location-scale members and their ensembles on a grid.
    Figure2 {
        /// Comma-separated `location:scale` pairs.
        #[arg(long, allow_hyphen_values = true)]
        members: String,
        /// `from:to:step`
        #[arg(long, allow_hyphen_values = true, default_value = "-6:6:0.01")]
        grid: String,
        #[arg(long, default_value = "logistic")]
        dist: String,
        #[arg(long, default_value = "equal")]
        weights: String,
    },
    /// Member and ensemble predictions at the observed outcome on the
    /// `F_Z^{-1}` scale.
    StructureCheck {
        #[command(flatten)]
        panel: PanelInput,
        #[arg(long)]
        pool: String,
        #[arg(long, default_value = "equal")]
        weights: String,
        #[arg(long, default_value = "logistic")]
        dist: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
