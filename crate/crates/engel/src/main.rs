use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use engel::config::{Overrides, RunConfig};
use engel::runner::{self, Outcome};

/// Construct, validate, and analyze sets with constant horizontal normal
/// in the step-3 group of 4 dimensions, plus filiform-algebra checks.
///
/// Exit codes: 0 all checks passed, 1 a validator found violations,
/// 2 configuration or argument failure.
#[derive(Parser)]
#[command(name = "engel", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the calibration validators against the configured set.
    Validate(CommonArgs),
    /// Export intrinsic-crossing and rotated-graph samples as CSV.
    Graph(CommonArgs),
    /// Regularity analysis: two-scale constants, blow-up fit, apertures.
    Analyze(CommonArgs),
    /// Filiform-algebra checks for a given step.
    Filiform(FiliformCmd),
    /// Reproduce the worked examples end to end.
    Demo(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Random seed (overrides the config; default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for reports and CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance for the pointwise derivative inequality.
    #[arg(long = "tol-pdi")]
    tol_pdi: Option<f64>,
    /// Bisection tolerance for crossing searches.
    #[arg(long = "tol-bisect")]
    tol_bisect: Option<f64>,
    /// Grid points per axis for exported grids.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct FiliformCmd {
    /// Nilpotency step (at least 2).
    #[arg(long)]
    step: usize,
    /// Comma-separated basis parameters, one per step; default 0..step-1.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    ts: Option<Vec<f64>>,
    /// Output directory for the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn with_config(
    args: &CommonArgs,
    run: impl FnOnce(&RunConfig) -> engel::Result<Outcome>,
) -> engel::Result<Outcome> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply_overrides(&Overrides {
        seed: args.seed,
        out: args.out.clone(),
        tol_pdi: args.tol_pdi,
        tol_bisect: args.tol_bisect,
        grid: args.grid,
    });
    run(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate(args) => with_config(args, runner::run_validate),
        Command::Graph(args) => with_config(args, runner::run_graph),
        Command::Analyze(args) => with_config(args, runner::run_analyze),
        Command::Demo(args) => with_config(args, runner::run_demo),
        Command::Filiform(f) => runner::run_filiform(f.step, f.ts.clone(), f.out.as_deref()),
    };
    match result {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
