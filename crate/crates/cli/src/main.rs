//! `robust-gates`: fit delay laws, build conflict curves, assign gates,
//! simulate and sweep the transit/robustness trade-off.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "robust-gates", version, about = "Robust airport gate assignment")]
struct Cli {
    /// Top-level seed; every stage derives its own stream from it.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Directory for outputs and run manifests.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// JSON file overriding solver, generator, ramp and grid defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit shifted log-normal laws to arrival and departure delays.
    Fit {
        delays: PathBuf,
        #[arg(long, default_value_t = 5.0)]
        bin_width: f64,
    },
    /// Pair turns by tail number and fit the delay propagation model.
    Turnfit {
        delays: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        bin_width: f64,
    },
    /// Tabulate the exact expected conflict duration and its exponential fit.
    ConflictCurve {
        #[arg(long)]
        delay_model: Option<PathBuf>,
        #[arg(long)]
        max: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Generate a synthetic daily schedule and its transfer matrix.
    GenSchedule {
        #[arg(long)]
        flights: Option<usize>,
        #[arg(long)]
        gates: Option<usize>,
        /// Squeeze the day into a four-hour window.
        #[arg(long)]
        compact: bool,
    },
    /// Build ramp geometry.
    GenRamp {
        #[arg(long, value_enum)]
        layout: LayoutArg,
        #[arg(long)]
        gates: usize,
        /// Concourses of a parallel ramp.
        #[arg(long)]
        concourses: Option<usize>,
    },
    /// Assign flights to gates.
    Assign {
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[command(flatten)]
        models: CurveArgs,
        #[arg(long, value_enum, default_value_t = Policy::Tabu)]
        policy: Policy,
        #[arg(long)]
        buffer: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long, requires = "transfers")]
        ramp: Option<PathBuf>,
        #[arg(long, requires = "ramp")]
        transfers: Option<PathBuf>,
    },
    /// Monte Carlo evaluation of an assignment.
    Simulate {
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[arg(long)]
        assignment: PathBuf,
        /// Delay model JSON from `fit`; otherwise the reference laws.
        #[arg(long)]
        delay_model: Option<PathBuf>,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Solve across trade-off weights and tabulate both objective terms.
    Tradeoff {
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[command(flatten)]
        models: CurveArgs,
        #[arg(long)]
        ramp: PathBuf,
        #[arg(long)]
        transfers: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.4,0.6,0.8,1")]
        alphas: Vec<f64>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Curve, greedy and tabu assignment, and simulation across traffic scales.
    Pipeline {
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[command(flatten)]
        models: CurveArgs,
        /// Existing assignment to compare against; not held to the buffer.
        #[arg(long)]
        baseline: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "1.0,1.1,1.2,1.3")]
        scales: Vec<f64>,
        #[arg(long)]
        buffer: Option<f64>,
        #[command(flatten)]
        sim: SimArgs,
    },
}

#[derive(Debug, Clone, Args)]
struct ScheduleArgs {
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long)]
    gates: usize,
}

#[derive(Debug, Clone, Args)]
struct CurveArgs {
    /// Fitted curve JSON; otherwise fitted from the delay model.
    #[arg(long, conflicts_with = "delay_model")]
    curve: Option<PathBuf>,
    /// Delay model JSON from `fit`; otherwise the reference laws.
    #[arg(long)]
    delay_model: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct SimArgs {
    /// Turn model JSON from `turnfit`; otherwise the reference model.
    #[arg(long)]
    turn_model: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Propagate departures without the residual term.
    #[arg(long)]
    no_residual: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    Greedy,
    Tabu,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayoutArg {
    Parallel,
    Horseshoe,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
