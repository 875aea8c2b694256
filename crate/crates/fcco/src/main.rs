use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fcco::{ExperimentConfig, Report};

#[derive(Parser)]
#[command(name = "fcco", version, about = "Run SOX-family optimizers on compositional objectives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (`section.key = value` lines)
    config: PathBuf,
    /// Run a single seed instead of `run.seeds`
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate the exact objective every N iterations
    #[arg(long)]
    eval_every: Option<usize>,
    /// Inner-oracle budget per run; sets the iteration count
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured optimizer for every seed
    Run(Common),
    /// Compare analytic and finite-difference gradients
    Gradcheck {
        #[command(flatten)]
        common: Common,
        /// Random points checked in addition to the initial point
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Vary the outer batch at a fixed total batch (`sweep.b_total`, `sweep.b1_list`)
    SweepQ1(Common),
    /// Vary the total batch with B1 = B2 (`sweep.b_list`, `sweep.threshold`)
    SweepQ2(Common),
    /// Vary the tracker rate (`sweep.gamma_list`)
    SweepGamma(Common),
    /// Compare optimizers at equal budget (`sweep.optimizers`)
    Compare(Common),
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_file(&common.config)
        .with_context(|| format!("loading {}", common.config.display()))?;
    if let Some(seed) = common.seed {
        cfg.seeds = vec![seed];
    }
    if let Some(out) = &common.out {
        cfg.output = out.clone();
    }
    if let Some(n) = common.eval_every {
        if n == 0 {
            bail!("--eval-every must be >= 1");
        }
        cfg.eval_every = n;
    }
    if let Some(budget) = common.budget {
        cfg.optimizer.apply_budget(budget, cfg.batch);
    }
    Ok(cfg)
}

fn finish(report: Report) -> ExitCode {
    println!("summary: {}", report.summary_path.display());
    for p in &report.points {
        let f = p.mean_final_f().map_or_else(|| "-".to_owned(), |f| format!("{f:.6e}"));
        println!("{:>16}  mean final F = {f}", p.label);
    }
    if report.all_completed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("at least one run aborted");
        ExitCode::FAILURE
    }
}

fn main() -> Result<ExitCode> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let report = match &cli.command {
        Command::Run(c) => fcco::run_experiment(&load(c)?)?,
        Command::Gradcheck { common, points } => {
            let cfg = load(common)?;
            let errors = fcco::gradcheck(&cfg, *points)?;
            let worst = errors.iter().copied().fold(0.0, f64::max);
            for (k, e) in errors.iter().enumerate() {
                println!("point {k}: relative error {e:.3e}");
            }
            return Ok(if worst <= 1e-5 { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::SweepQ1(c) => {
            let cfg = load(c)?;
            let b_total = cfg.sweep.b_total.context("sweep.b_total is required")?;
            fcco::sweep_q1(&cfg, b_total, &cfg.sweep.b1_list)?
        }
        Command::SweepQ2(c) => {
            let cfg = load(c)?;
            let threshold = cfg.sweep.threshold.context("sweep.threshold is required")?;
            fcco::sweep_q2(&cfg, &cfg.sweep.b_list, threshold)?
        }
        Command::SweepGamma(c) => {
            let cfg = load(c)?;
            fcco::sweep_gamma(&cfg, &cfg.sweep.gamma_list)?
        }
        Command::Compare(c) => {
            let cfg = load(c)?;
            if cfg.sweep.optimizers.is_empty() {
                bail!("sweep.optimizers is empty");
            }
            fcco::compare_optimizers(&cfg, &cfg.sweep.optimizers)?
        }
    };
    Ok(finish(report))
}
