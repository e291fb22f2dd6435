//! Command-line driver for the two benchmark experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epipolar_core::criteria::KanataniConfig;

use epipolar_bench::csv_io::{write_aggregate, write_measurements, write_success};
use epipolar_bench::error::{BenchError, Result};
use epipolar_bench::gnuplot::{render_script, CRITERIA_KEYS, SUCCESS_KEYS};
use epipolar_bench::{
    aggregate_criteria, aggregate_success, decade_levels, run_criteria, run_success_rate,
    CriteriaConfig, SuccessRateConfig, Variant,
};

#[derive(Parser)]
#[command(name = "bench", version, about = "Epipolar criteria benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure how reliably the generator hits each error level.
    SuccessRate(SuccessRateArgs),
    /// Measure accuracy and cost of the criteria against the exact error.
    Criteria(CriteriaArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Error levels: a comma list (e.g. "0.5,1,2") or "decades:LO:HI".
    #[arg(long, default_value = "decades:1e-6:1e6")]
    levels: String,
    /// Repetitions per level.
    #[arg(long, default_value_t = 1000)]
    reps: u64,
    /// Master seed; every record derives its own substream from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path for the record stream.
    #[arg(long)]
    out: PathBuf,
    /// Mean focal length of the random cameras, pixels.
    #[arg(long, default_value_t = 1300.0)]
    favg: f64,
    /// Seed redraw budget of the generator.
    #[arg(long, default_value_t = 200)]
    max_trials: usize,
    /// Optional per-level aggregate CSV path.
    #[arg(long)]
    aggregate: Option<PathBuf>,
    /// Optional gnuplot script path (requires --aggregate).
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Gp,
    Parametric,
    Both,
}

impl VariantArg {
    fn to_variants(self) -> Vec<Variant> {
        match self {
            VariantArg::Gp => vec![Variant::Gp],
            VariantArg::Parametric => vec![Variant::Parametric],
            VariantArg::Both => vec![Variant::Gp, Variant::Parametric],
        }
    }
}

#[derive(Args)]
struct SuccessRateArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Which seeding variant(s) to run.
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    variant: VariantArg,
}

#[derive(Args)]
struct CriteriaArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Convergence threshold of the iterative correction.
    #[arg(long, default_value_t = 1e-6)]
    rek_delta: f64,
    /// Iteration cap of the iterative correction.
    #[arg(long, default_value_t = 1000)]
    rek_max_iters: usize,
}

fn parse_levels(spec: &str) -> Result<Vec<f64>> {
    if let Some(range) = spec.strip_prefix("decades:") {
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi] = parts.as_slice() else {
            return Err(BenchError::InvalidConfig {
                reason: format!("expected decades:LO:HI, got {spec:?}"),
            });
        };
        let lo: f64 = lo.parse().map_err(|_| BenchError::InvalidConfig {
            reason: format!("decade bound is not a number: {lo:?}"),
        })?;
        let hi: f64 = hi.parse().map_err(|_| BenchError::InvalidConfig {
            reason: format!("decade bound is not a number: {hi:?}"),
        })?;
        return decade_levels(lo, hi);
    }
    spec.split(',')
        .map(|token| {
            token.trim().parse::<f64>().map_err(|_| BenchError::InvalidConfig {
                reason: format!("level is not a number: {token:?}"),
            })
        })
        .collect()
}

fn check_plot_args(sweep: &SweepArgs) -> Result<()> {
    if sweep.gnuplot.is_some() && sweep.aggregate.is_none() {
        return Err(BenchError::InvalidConfig {
            reason: "--gnuplot requires --aggregate".to_string(),
        });
    }
    Ok(())
}

fn emit_plot(sweep: &SweepArgs, title: &str, keys: &[&str]) -> Result<()> {
    if let (Some(script_path), Some(agg_path)) = (&sweep.gnuplot, &sweep.aggregate) {
        let script = render_script(agg_path, title, keys);
        std::fs::write(script_path, script).map_err(|source| BenchError::Io {
            path: script_path.clone(),
            source,
        })?;
    }
    Ok(())
}

fn run_success_command(args: &SuccessRateArgs) -> Result<()> {
    check_plot_args(&args.sweep)?;
    let mut cfg = SuccessRateConfig::new(
        parse_levels(&args.sweep.levels)?,
        args.sweep.reps,
        args.sweep.seed,
    );
    cfg.scene.f_avg = args.sweep.favg;
    cfg.max_trials = args.sweep.max_trials;
    cfg.variants = args.variant.to_variants();
    let records = run_success_rate(&cfg)?;
    write_success(&args.sweep.out, &records)?;
    eprintln!(
        "wrote {} success-rate records to {}",
        records.len(),
        args.sweep.out.display()
    );
    if let Some(agg_path) = &args.sweep.aggregate {
        write_aggregate(agg_path, &aggregate_success(&records)?)?;
        eprintln!("wrote aggregate to {}", agg_path.display());
    }
    emit_plot(&args.sweep, "generator success rate", &SUCCESS_KEYS)
}

fn run_criteria_command(args: &CriteriaArgs) -> Result<()> {
    check_plot_args(&args.sweep)?;
    let mut cfg = CriteriaConfig::new(
        parse_levels(&args.sweep.levels)?,
        args.sweep.reps,
        args.sweep.seed,
    );
    cfg.scene.f_avg = args.sweep.favg;
    cfg.max_trials = args.sweep.max_trials;
    cfg.rek = KanataniConfig {
        delta: args.rek_delta,
        max_iterations: args.rek_max_iters,
    };
    let run = run_criteria(&cfg)?;
    write_measurements(&args.sweep.out, &run.records)?;
    eprintln!(
        "wrote {} measurement records to {}",
        run.records.len(),
        args.sweep.out.display()
    );
    for audit in &run.audit {
        if audit.skipped > 0 || audit.non_converged > 0 {
            eprintln!(
                "level {:.3e}: {} reps skipped after retries, {} non-converged corrections",
                cfg.levels[audit.level_index], audit.skipped, audit.non_converged
            );
        }
    }
    if let Some(agg_path) = &args.sweep.aggregate {
        write_aggregate(agg_path, &aggregate_criteria(&run.records)?)?;
        eprintln!("wrote aggregate to {}", agg_path.display());
    }
    emit_plot(&args.sweep, "criteria accuracy and cost", &CRITERIA_KEYS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SuccessRate(args) => run_success_command(args),
        Command::Criteria(args) => run_criteria_command(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
