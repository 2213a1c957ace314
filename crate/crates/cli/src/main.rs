//! `ordermin` — derivative-free optimization from pairwise comparisons.
//!
//! Three subcommands:
//! * `run`    — execute one experiment (config file and/or flags) and print
//!   its summary, optionally exporting a per-iteration CSV;
//! * `budget` — print the exact comparison-query cost of one gradient
//!   direction estimate;
//! * `verify` — run the acceptance suite, one verdict line per criterion.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 acceptance violation.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ordermin::{
    all_passed, parse_config_text, query_budget, run_all, run_experiment, Error, ExperimentConfig,
    RunStatus,
};

#[derive(Parser)]
#[command(
    name = "ordermin",
    version,
    about = "Minimize smooth strictly quasi-convex functions using only pairwise comparisons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and print its summary.
    Run(Box<RunArgs>),
    /// Print the exact comparison-query budget of one direction estimate.
    Budget(BudgetArgs),
    /// Run the acceptance suite (one verdict line per criterion).
    Verify,
}

/// Flags mirror the config-file keys; a flag overrides the file's value.
#[derive(Args)]
struct RunArgs {
    /// Config file with `key = value` lines (# comments allowed).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Benchmark family: quadratic, log_quadratic, or exp_bump.
    #[arg(long)]
    benchmark: Option<String>,
    /// Ambient dimension.
    #[arg(long)]
    dim: Option<u64>,
    /// Algorithm: comparison_adangd, exact_ngd, or approx_ngd_with_gde.
    #[arg(long)]
    algorithm: Option<String>,
    /// Bound D on the initial distance to the minimizer.
    #[arg(long = "D", value_name = "D")]
    d_bound: Option<f64>,
    /// Smoothness constant L (defaults to the benchmark's certified one).
    #[arg(long = "L", value_name = "L")]
    smoothness: Option<f64>,
    /// Target projection accuracy (comparison_adangd only).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Iteration count (exact_ngd and approx_ngd_with_gde).
    #[arg(long)]
    iters: Option<u64>,
    /// Per-estimate direction accuracy in (0, 1] (approx_ngd_with_gde).
    #[arg(long)]
    delta: Option<f64>,
    /// Gradient-norm floor assumed by estimation (default 2*D*delta).
    #[arg(long)]
    gamma: Option<f64>,
    /// Explicit initial point, comma-separated (overrides sampling).
    #[arg(long)]
    x1: Option<String>,
    /// Sampling radius for the initial point (default D/2).
    #[arg(long)]
    x1_radius: Option<f64>,
    /// Sampling center for the initial point, comma-separated (default:
    /// the benchmark's minimizer).
    #[arg(long)]
    x1_center: Option<String>,
    /// Seed for the deterministic initial-point sampler (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Benchmark minimizer location, comma-separated (default: origin).
    #[arg(long)]
    center: Option<String>,
    /// Per-coordinate curvatures for the quadratic benchmark,
    /// comma-separated.
    #[arg(long)]
    spectrum: Option<String>,
    /// Write a per-iteration CSV (iter,h_k,queries_cum,f_gap,v_f,dist).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Ambient dimension.
    #[arg(long)]
    dim: usize,
    /// Per-estimate direction accuracy in (0, 1].
    #[arg(long)]
    delta: f64,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(match error {
                Error::NumericalFailure { .. } | Error::ContractViolation(_) => 3,
                _ => 2,
            })
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run(args) => run(*args),
        Command::Budget(args) => {
            println!("{}", query_budget(args.dim, args.delta)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify => {
            let outcomes = run_all();
            for outcome in &outcomes {
                println!("{outcome}");
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            println!("acceptance: {passed}/{} criteria passed", outcomes.len());
            if all_passed(&outcomes) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(4))
            }
        }
    }
}

fn run(args: RunArgs) -> Result<ExitCode, Error> {
    let mut map = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_config_text(&text)?
        }
        None => BTreeMap::new(),
    };
    let mut set = |key: &str, value: Option<String>| {
        if let Some(value) = value {
            map.insert(key.to_string(), value);
        }
    };
    set("benchmark", args.benchmark);
    set("dim", args.dim.map(|v| v.to_string()));
    set("algorithm", args.algorithm);
    set("D", args.d_bound.map(|v| v.to_string()));
    set("L", args.smoothness.map(|v| v.to_string()));
    set("epsilon", args.epsilon.map(|v| v.to_string()));
    set("iters", args.iters.map(|v| v.to_string()));
    set("delta", args.delta.map(|v| v.to_string()));
    set("gamma", args.gamma.map(|v| v.to_string()));
    set("x1", args.x1);
    set("x1_radius", args.x1_radius.map(|v| v.to_string()));
    set("x1_center", args.x1_center);
    set("seed", args.seed.map(|v| v.to_string()));
    set("center", args.center);
    set("spectrum", args.spectrum);
    set("out", args.out.map(|p| p.display().to_string()));

    let config = ExperimentConfig::from_map(&map)?;
    let run = run_experiment(&config)?;
    print!("{}", run.summary);
    match run.summary.status {
        RunStatus::Completed => Ok(ExitCode::SUCCESS),
        RunStatus::Failed { .. } => Ok(ExitCode::from(3)),
    }
}
