//! Experiment runner: builds the problem from a config, runs every seed,
//! and writes one CSV per run plus a summary CSV.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use fcco_core::data::{ap_metric, gen_clusters, gen_queries, gen_ranking, ClusterData, RankingDataset};
use fcco_core::objectives::{make_ap_problem, make_listnet_problem, make_nca_problem, make_pnorm_push_problem, PnormPush};
use fcco_core::optim::Method;
use fcco_core::verify::{gradient_check, FD_STEP};
use fcco_core::{full_gradient, full_objective, rng_from_seed, Ball, BatchSpec, FccoProblem};
use rand::Rng;
use rayon::prelude::*;

use crate::config::{DataSource, ExperimentConfig, Init, MethodKind, ObjectiveKind, LR_GRID};
use crate::error::{HarnessError, Result};
use crate::libsvm::read_libsvm;

/// CSV header of a per-run file, in field order of [`RunRecord`].
pub const RUN_HEADER: [&str; 8] =
    ["iteration", "epoch", "inner_oracle_count", "decay_touches", "train_f", "grad_norm", "metric", "wallclock"];

/// CSV header of a summary file.
pub const SUMMARY_HEADER: [&str; 11] = [
    "label",
    "seeds",
    "completed",
    "final_f_mean",
    "final_f_std",
    "metric_mean",
    "metric_std",
    "final_f_avg_mean",
    "best_iteration",
    "iters_to_threshold",
    "rank",
];

type Metric = dyn Fn(&[f64], f64) -> Option<f64> + Send + Sync;

/// A built problem with its evaluation hooks.
pub struct Experiment {
    pub problem: Arc<dyn FccoProblem + Send>,
    pub w0: Vec<f64>,
    /// `Σ_i |S_i|`, the oracle cost of one exact pass.
    pub oracle_size: u64,
    metric: Box<Metric>,
    pnorm: Option<Arc<PnormPush>>,
}

impl std::fmt::Debug for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Experiment")
            .field("n_outer", &self.problem.n_outer())
            .field("dim_w", &self.problem.dim_w())
            .field("oracle_size", &self.oracle_size)
            .finish()
    }
}

fn ranking_data(cfg: &ExperimentConfig) -> Result<RankingDataset> {
    let mut rng = rng_from_seed(cfg.data.seed);
    match &cfg.data.source {
        DataSource::Ranking { n_pos, n_neg, dim, separation, noise } => {
            Ok(gen_ranking(*n_pos, *n_neg, *dim, *separation, *noise, &mut rng)?)
        }
        DataSource::Libsvm { path, threshold } => Ok(read_libsvm(path)?.to_ranking(*threshold)?),
        _ => Err(HarnessError::Config("ranking objectives need ranking or libsvm data".into())),
    }
}

fn cluster_data(cfg: &ExperimentConfig) -> Result<ClusterData> {
    let mut rng = rng_from_seed(cfg.data.seed);
    match &cfg.data.source {
        DataSource::Clusters { n_per_class, n_classes, dim, spread } => {
            Ok(gen_clusters(*n_per_class, *n_classes, *dim, *spread, &mut rng)?)
        }
        DataSource::Libsvm { path, .. } => {
            let sparse = read_libsvm(path)?;
            let (points, labels) = sparse.to_classes();
            Ok(ClusterData { points, dim: sparse.dim as usize, labels })
        }
        _ => Err(HarnessError::Config("nca needs clusters or libsvm data".into())),
    }
}

impl Experiment {
    pub fn build(cfg: &ExperimentConfig) -> Result<Self> {
        let obj = cfg.objective;
        let mut pnorm = None;
        let (problem, metric): (Arc<dyn FccoProblem + Send>, Box<Metric>) = match obj.kind {
            ObjectiveKind::Ap | ObjectiveKind::PnormPush => {
                let full = ranking_data(cfg)?;
                let (train, eval) = if cfg.data.test_fraction > 0.0 {
                    let mut rng = rng_from_seed(cfg.data.seed ^ 0x5eed_5017);
                    let (tr, te) = fcco_core::data::split_indices(full.len(), cfg.data.test_fraction, &mut rng)?;
                    (full.select(&tr)?, full.select(&te)?)
                } else {
                    (full.clone(), full)
                };
                let metric: Box<Metric> = Box::new(move |w, _| ap_metric(&eval.scores(w), eval.labels()).ok());
                let problem: Arc<dyn FccoProblem + Send> = if obj.kind == ObjectiveKind::Ap {
                    Arc::new(make_ap_problem(train, obj.loss))
                } else {
                    let p = Arc::new(make_pnorm_push_problem(train, obj.p, obj.loss)?);
                    pnorm = Some(Arc::clone(&p));
                    p
                };
                (problem, metric)
            }
            ObjectiveKind::Nca => {
                let data = cluster_data(cfg)?;
                (Arc::new(make_nca_problem(&data, obj.rank)?), Box::new(|_, _| None))
            }
            ObjectiveKind::ListNet => {
                let DataSource::Queries { n_queries, items, dim } = cfg.data.source else {
                    return Err(HarnessError::Config("listnet needs query data".into()));
                };
                let queries = gen_queries(n_queries, items, dim, &mut rng_from_seed(cfg.data.seed))?;
                let problem = Arc::new(make_listnet_problem(queries, dim)?);
                let ce = Arc::clone(&problem);
                (problem, Box::new(move |_, f| Some(ce.to_cross_entropy(f))))
            }
        };
        let problem: Arc<dyn FccoProblem + Send> = match obj.radius {
            Some(r) => Arc::new(Ball::new(problem, r)),
            None => problem,
        };
        let dim = problem.dim_w();
        let mut w0 = vec![0.0; dim];
        if cfg.init == Init::Identity {
            if obj.kind != ObjectiveKind::Nca {
                return Err(HarnessError::Config("run.init = identity only applies to nca".into()));
            }
            let cols = dim / obj.rank;
            for k in 0..obj.rank.min(cols) {
                w0[k * cols + k] = 1.0;
            }
        }
        let oracle_size = (0..problem.n_outer()).map(|i| problem.inner_size(i) as u64).sum();
        Ok(Experiment { problem, w0, oracle_size, metric, pnorm })
    }

    fn metric(&self, w: &[f64], f: f64) -> Option<f64> {
        (self.metric)(w, f)
    }
}

/// One CSV row. Evaluated fields are `None` away from eval strides.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub iteration: usize,
    pub epoch: f64,
    pub inner_oracle_count: u64,
    pub decay_touches: u64,
    pub train_f: Option<f64>,
    pub grad_norm: Option<f64>,
    pub metric: Option<f64>,
    pub wallclock: Option<f64>,
}

/// Outcome of one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedRun {
    pub seed: u64,
    pub initial_f: f64,
    pub records: Vec<RunRecord>,
    /// `(iteration, message)` if the run aborted.
    pub abort: Option<(usize, String)>,
    pub final_f: Option<f64>,
    pub final_metric: Option<f64>,
    /// Objective at the averaged iterate (primal-dual SOX).
    pub final_f_avg: Option<f64>,
    pub iterations: usize,
}

impl SeedRun {
    /// First iteration with `train_f ≤ threshold` (0 if the start already
    /// qualifies), at eval-stride resolution; `T + 1` if never reached.
    pub fn iterations_to(&self, threshold: f64) -> usize {
        if self.initial_f <= threshold {
            return 0;
        }
        self.records
            .iter()
            .find(|r| r.train_f.is_some_and(|f| f <= threshold))
            .map_or(self.iterations + 1, |r| r.iteration)
    }

    /// Iteration with the lowest evaluated training objective.
    pub fn best_iteration(&self) -> Option<usize> {
        self.records
            .iter()
            .filter_map(|r| r.train_f.map(|f| (r.iteration, f)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(t, _)| t)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub eval_every: usize,
    pub record_time: bool,
}

impl RunOptions {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        RunOptions { eval_every: cfg.eval_every, record_time: cfg.record_time }
    }
}

/// Runs `method` once from `exp.w0` with the given seed.
pub fn run_seed(exp: &Experiment, method: &Method, seed: u64, opts: RunOptions) -> Result<SeedRun> {
    let problem = &*exp.problem;
    method.validate_for(problem)?;
    let total = method.total_iters();
    let initial_f = full_objective(problem, &exp.w0)?;
    let start = Instant::now();
    let mut records = Vec::with_capacity(total);
    let mut rng = rng_from_seed(seed);
    let result = method.run(problem, &exp.w0, &mut rng, &mut |step, w| {
        let evaluate = step.iteration % opts.eval_every == 0 || step.iteration == total;
        let (train_f, grad_norm, metric) = if evaluate {
            let f = full_objective(problem, w).ok();
            let g = full_gradient(problem, w).ok().map(|g| g.norm());
            (f, g, f.and_then(|f| exp.metric(w, f)))
        } else {
            (None, None, None)
        };
        records.push(RunRecord {
            iteration: step.iteration,
            epoch: step.inner_oracles as f64 / exp.oracle_size as f64,
            inner_oracle_count: step.inner_oracles,
            decay_touches: step.decay_touches,
            train_f,
            grad_norm,
            metric,
            wallclock: opts.record_time.then(|| start.elapsed().as_secs_f64()),
        });
    });
    let mut run = SeedRun {
        seed,
        initial_f,
        records,
        abort: None,
        final_f: None,
        final_metric: None,
        final_f_avg: None,
        iterations: total,
    };
    match result {
        Ok(out) => {
            let f = full_objective(problem, &out.w)?;
            run.final_f = Some(f);
            run.final_metric = exp.metric(&out.w, f);
            if let Some(avg) = &out.w_avg {
                run.final_f_avg = full_objective(problem, avg).ok();
            }
        }
        Err(fcco_core::Error::Aborted { iteration, source }) => {
            log::error!("seed {seed}: run aborted at iteration {iteration}: {source}");
            run.abort = Some((iteration, source.to_string()));
        }
        Err(e) => return Err(e.into()),
    }
    if let Some(p) = &exp.pnorm {
        let clamps = p.clamp_count();
        if clamps > 0 {
            log::warn!("p-norm push clamped {clamps} exponent arguments so far");
        }
    }
    Ok(run)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes a per-run CSV. An aborted run ends with a `# aborted …` diagnostic line.
pub fn write_run_csv(path: &Path, run: &SeedRun) -> Result<()> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(RUN_HEADER)?;
        for r in &run.records {
            w.write_record([
                r.iteration.to_string(),
                r.epoch.to_string(),
                r.inner_oracle_count.to_string(),
                r.decay_touches.to_string(),
                fmt_opt(r.train_f),
                fmt_opt(r.grad_norm),
                fmt_opt(r.metric),
                r.wallclock.map(|t| format!("{t:.6}")).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
    }
    if let Some((iteration, message)) = &run.abort {
        writeln!(buf, "# aborted at iteration {iteration}: {}", message.replace('\n', " "))?;
    }
    fs::write(path, buf).map_err(|source| HarnessError::File { path: path.to_owned(), source })
}

/// All seeds of one configuration.
#[derive(Debug, Clone)]
pub struct Point {
    pub label: String,
    pub method: Method,
    pub runs: Vec<SeedRun>,
}

fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Some((mean, var.sqrt()))
}

fn median(mut values: Vec<usize>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 { values[m] as f64 } else { (values[m - 1] + values[m]) as f64 / 2.0 })
}

impl Point {
    pub fn completed(&self) -> bool {
        self.runs.iter().all(|r| r.abort.is_none())
    }

    pub fn final_fs(&self) -> Vec<f64> {
        self.runs.iter().filter_map(|r| r.final_f).collect()
    }

    /// Mean final training objective over completed seeds.
    pub fn mean_final_f(&self) -> Option<f64> {
        mean_std(&self.final_fs()).map(|m| m.0)
    }

    pub fn median_iterations_to(&self, threshold: f64) -> Option<f64> {
        median(self.runs.iter().map(|r| r.iterations_to(threshold)).collect())
    }
}

/// Outcome of a run or sweep.
#[derive(Debug, Clone)]
pub struct Report {
    pub points: Vec<Point>,
    pub threshold: Option<f64>,
    pub summary_path: PathBuf,
}

impl Report {
    pub fn all_completed(&self) -> bool {
        self.points.iter().all(Point::completed)
    }

    pub fn point(&self, label: &str) -> Option<&Point> {
        self.points.iter().find(|p| p.label == label)
    }
}

fn write_summary(path: &Path, points: &[Point], threshold: Option<f64>) -> Result<()> {
    let means: Vec<Option<f64>> = points.iter().map(Point::mean_final_f).collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| means[a].unwrap_or(f64::INFINITY).total_cmp(&means[b].unwrap_or(f64::INFINITY)));
    let mut rank = vec![0; points.len()];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r + 1;
    }

    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SUMMARY_HEADER)?;
    for (k, p) in points.iter().enumerate() {
        let f = mean_std(&p.final_fs());
        let metrics: Vec<f64> = p.runs.iter().filter_map(|r| r.final_metric).collect();
        let m = mean_std(&metrics);
        let avg: Vec<f64> = p.runs.iter().filter_map(|r| r.final_f_avg).collect();
        let best = median(p.runs.iter().filter_map(SeedRun::best_iteration).collect());
        let to_threshold = threshold.and_then(|t| p.median_iterations_to(t));
        w.write_record([
            p.label.clone(),
            p.runs.len().to_string(),
            p.runs.iter().filter(|r| r.abort.is_none()).count().to_string(),
            fmt_opt(f.map(|x| x.0)),
            fmt_opt(f.map(|x| x.1)),
            fmt_opt(m.map(|x| x.0)),
            fmt_opt(m.map(|x| x.1)),
            fmt_opt(mean_std(&avg).map(|x| x.0)),
            fmt_opt(best),
            fmt_opt(to_threshold),
            rank[k].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Thread pool capped by `FCCO_THREADS` (all cores if unset).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("FCCO_THREADS") {
        let n: usize =
            v.trim().parse().map_err(|_| HarnessError::Config(format!("FCCO_THREADS must be a number, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| HarnessError::Config(format!("cannot start thread pool: {e}")))
}

fn run_grid(exp: &Experiment, grid: &[(String, Method)], seeds: &[u64], opts: RunOptions) -> Result<Vec<Point>> {
    for (_, method) in grid {
        method.validate_for(&*exp.problem)?;
    }
    let jobs: Vec<(usize, u64)> = (0..grid.len()).flat_map(|k| seeds.iter().map(move |&s| (k, s))).collect();
    let results: Vec<SeedRun> =
        thread_pool()?.install(|| jobs.par_iter().map(|&(k, s)| run_seed(exp, &grid[k].1, s, opts)).collect::<Result<_>>())?;
    let mut results = results.into_iter();
    Ok(grid
        .iter()
        .map(|(label, method)| Point {
            label: label.clone(),
            method: method.clone(),
            runs: results.by_ref().take(seeds.len()).collect(),
        })
        .collect())
}

fn write_outputs(dir: &Path, prefix: &str, points: Vec<Point>, threshold: Option<f64>) -> Result<Report> {
    fs::create_dir_all(dir).map_err(|source| HarnessError::File { path: dir.to_owned(), source })?;
    for p in &points {
        for run in &p.runs {
            write_run_csv(&dir.join(format!("{prefix}_{}_seed{}.csv", p.label, run.seed)), run)?;
        }
    }
    let summary_path = dir.join(format!("{prefix}_summary.csv"));
    write_summary(&summary_path, &points, threshold)?;
    Ok(Report { points, threshold, summary_path })
}

/// Picks the step size from the tuning grid with the lowest mean final objective.
pub fn tune_learning_rate(exp: &Experiment, cfg: &ExperimentConfig) -> Result<f64> {
    let grid: Vec<(String, Method)> = LR_GRID
        .iter()
        .map(|&eta| {
            let mut spec = cfg.optimizer.clone();
            spec.eta = eta;
            (format!("eta{eta}"), spec.method(cfg.batch))
        })
        .collect();
    let opts = RunOptions { eval_every: usize::MAX, record_time: false };
    let points = run_grid(exp, &grid, &cfg.seeds, opts)?;
    let best = points
        .iter()
        .zip(LR_GRID)
        .filter(|(p, _)| p.completed())
        .min_by(|a, b| a.0.mean_final_f().unwrap_or(f64::INFINITY).total_cmp(&b.0.mean_final_f().unwrap_or(f64::INFINITY)))
        .map(|(_, eta)| eta)
        .ok_or_else(|| HarnessError::Config("every step size in the tuning grid aborted".into()))?;
    log::info!("tuned step size: {best}");
    Ok(best)
}

fn prepared(cfg: &ExperimentConfig) -> Result<(Experiment, ExperimentConfig)> {
    let exp = Experiment::build(cfg)?;
    let mut cfg = cfg.clone();
    if cfg.optimizer.tune {
        cfg.optimizer.eta = tune_learning_rate(&exp, &cfg)?;
    }
    Ok((exp, cfg))
}

/// Runs the configured optimizer for every seed.
///
/// Writes `run_seed<s>.csv` per seed and `run_summary.csv` into the output directory.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let (exp, cfg) = prepared(cfg)?;
    let grid = vec![(String::from("run"), cfg.method())];
    let points = run_grid(&exp, &grid, &cfg.seeds, RunOptions::from_config(&cfg))?;
    // a lone run keeps the short file names
    fs::create_dir_all(&cfg.output).map_err(|source| HarnessError::File { path: cfg.output.clone(), source })?;
    for run in &points[0].runs {
        write_run_csv(&cfg.output.join(format!("run_seed{}.csv", run.seed)), run)?;
    }
    let summary_path = cfg.output.join("run_summary.csv");
    write_summary(&summary_path, &points, None)?;
    Ok(Report { points, threshold: None, summary_path })
}

/// SOX at every split `B1 + B2 = b_total`.
pub fn sweep_q1(cfg: &ExperimentConfig, b_total: usize, b1_list: &[usize]) -> Result<Report> {
    for &b1 in b1_list {
        if b1 == 0 || b1 >= b_total {
            return Err(HarnessError::Config(format!("B1 = {b1} leaves no inner batch out of B = {b_total}")));
        }
    }
    let (exp, cfg) = prepared(cfg)?;
    let mut spec = cfg.optimizer.clone();
    spec.kind = MethodKind::Sox;
    let grid = b1_list
        .iter()
        .map(|&b1| (format!("b1_{b1}"), spec.method(BatchSpec::new(b1, b_total - b1))))
        .collect::<Vec<_>>();
    let points = run_grid(&exp, &grid, &cfg.seeds, RunOptions::from_config(&cfg))?;
    write_outputs(&cfg.output, "q1", points, None)
}

/// SOX with `B1 = B2 = B/2` for each `B`, recording iterations to `threshold`.
pub fn sweep_q2(cfg: &ExperimentConfig, b_list: &[usize], threshold: f64) -> Result<Report> {
    for &b in b_list {
        if b < 2 || b % 2 != 0 {
            return Err(HarnessError::Config(format!("B = {b} must be even and >= 2")));
        }
    }
    let (exp, cfg) = prepared(cfg)?;
    let mut spec = cfg.optimizer.clone();
    spec.kind = MethodKind::Sox;
    let grid = b_list.iter().map(|&b| (format!("b_{b}"), spec.method(BatchSpec::new(b / 2, b / 2)))).collect::<Vec<_>>();
    let points = run_grid(&exp, &grid, &cfg.seeds, RunOptions::from_config(&cfg))?;
    write_outputs(&cfg.output, "q2", points, Some(threshold))
}

/// The configured optimizer at each tracker rate; duplicates are dropped with a warning.
pub fn sweep_gamma(cfg: &ExperimentConfig, gamma_list: &[f64]) -> Result<Report> {
    let mut gammas: Vec<f64> = Vec::new();
    for &g in gamma_list {
        if !(g > 0.0 && g <= 1.0) {
            return Err(HarnessError::Config(format!("gamma = {g} outside (0, 1]")));
        }
        if gammas.contains(&g) {
            log::warn!("duplicate gamma {g} ignored");
        } else {
            gammas.push(g);
        }
    }
    let (exp, cfg) = prepared(cfg)?;
    let grid = gammas
        .iter()
        .map(|&g| {
            let mut spec = cfg.optimizer.clone();
            spec.gamma = g;
            (format!("gamma_{g}"), spec.method(cfg.batch))
        })
        .collect::<Vec<_>>();
    let points = run_grid(&exp, &grid, &cfg.seeds, RunOptions::from_config(&cfg))?;
    write_outputs(&cfg.output, "gamma", points, None)
}

/// Seed-matched runs of several optimizers at the same inner-oracle budget.
///
/// Labels are the optimizer names; a repeated optimizer gets a `_2`, `_3`, … suffix.
pub fn compare_optimizers(cfg: &ExperimentConfig, optimizers: &[MethodKind]) -> Result<Report> {
    let (exp, cfg) = prepared(cfg)?;
    let budget = (cfg.optimizer.iters * cfg.batch.outer * cfg.batch.inner) as u64;
    let mut grid: Vec<(String, Method)> = Vec::new();
    for &kind in optimizers {
        let mut spec = cfg.optimizer.clone();
        spec.kind = kind;
        spec.apply_budget(budget, cfg.batch);
        let repeats = grid.iter().filter(|(_, m)| m.name() == kind.name()).count();
        let label = if repeats == 0 { kind.name().to_owned() } else { format!("{}_{}", kind.name(), repeats + 1) };
        grid.push((label, spec.method(cfg.batch)));
    }
    let points = run_grid(&exp, &grid, &cfg.seeds, RunOptions::from_config(&cfg))?;
    write_outputs(&cfg.output, "compare", points, None)
}

/// Gradient check at the initial point and at `points` random points in `[-1, 1]^d`.
pub fn gradcheck(cfg: &ExperimentConfig, points: usize) -> Result<Vec<f64>> {
    let exp = Experiment::build(cfg)?;
    let problem = &*exp.problem;
    let mut rng = rng_from_seed(cfg.seeds[0]);
    let mut errors = vec![gradient_check(problem, &exp.w0, FD_STEP)?];
    for _ in 0..points {
        let w: Vec<f64> = (0..problem.dim_w()).map(|_| rng.random_range(-1.0..1.0)).collect();
        errors.push(gradient_check(problem, &w, FD_STEP)?);
    }
    Ok(errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterations_to_threshold_rules() {
        let rec = |iteration, f| RunRecord {
            iteration,
            epoch: 0.0,
            inner_oracle_count: 0,
            decay_touches: 0,
            train_f: f,
            grad_norm: None,
            metric: None,
            wallclock: None,
        };
        let run = SeedRun {
            seed: 0,
            initial_f: 1.0,
            records: vec![rec(1, None), rec(2, Some(0.8)), rec(3, None), rec(4, Some(0.5))],
            abort: None,
            final_f: Some(0.5),
            final_metric: None,
            final_f_avg: None,
            iterations: 4,
        };
        assert_eq!(run.iterations_to(1.0), 0);
        assert_eq!(run.iterations_to(0.9), 2);
        assert_eq!(run.iterations_to(0.5), 4);
        assert_eq!(run.iterations_to(0.1), 5);
        assert_eq!(run.best_iteration(), Some(4));
    }

    #[test]
    fn stats() {
        assert_eq!(mean_std(&[1.0, 3.0]), Some((2.0, 2f64.sqrt())));
        assert_eq!(mean_std(&[]), None);
        assert_eq!(median(vec![3, 1, 2]), Some(2.0));
        assert_eq!(median(vec![4, 1, 2, 3]), Some(2.5));
    }
}
