use std::fs;
use std::path::Path;

use fcco::config::MethodKind;
use fcco::{compare_optimizers, run_experiment, sweep_gamma, sweep_q1, sweep_q2, ExperimentConfig, HarnessError, RawConfig};

const BASE: &str = "
objective.kind = ap
objective.loss = exponential
objective.radius = 2
data.n_pos = 10
data.n_neg = 20
data.dim = 3
optimizer.kind = sox
optimizer.eta = 0.05
optimizer.iters = 20
batch.outer = 2
batch.inner = 4
run.seeds = 1
run.eval_every = 5
";

/// `BASE` with `key = value` overrides from `extra`, writing into `out`.
fn config(extra: &str, out: &Path) -> ExperimentConfig {
    let mut raw = RawConfig::parse(BASE).unwrap();
    for line in extra.lines() {
        let (key, value) = line.split_once('=').unwrap();
        raw.set(key.trim(), value.trim());
    }
    raw.set("output.dir", out.display().to_string());
    ExperimentConfig::from_raw(&raw).unwrap()
}

fn csv_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    names
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_owned).collect()
}

#[test]
fn single_iteration_gives_header_and_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&config("optimizer.iters = 1", dir.path())).unwrap();
    assert!(report.all_completed());
    let rows = lines(&dir.path().join("run_seed1.csv"));
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("iteration,epoch,inner_oracle_count"));
    assert!(rows[1].starts_with("1,"));
}

#[test]
fn output_path_does_not_change_content() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_experiment(&config("run.seeds = 1,2", a.path())).unwrap();
    run_experiment(&config("run.seeds = 1,2", b.path())).unwrap();
    assert_eq!(csv_files(a.path()), csv_files(b.path()));
    for name in csv_files(a.path()) {
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name}");
    }
}

#[test]
fn non_eval_fields_are_empty() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&config("optimizer.iters = 7\nrun.eval_every = 3", dir.path())).unwrap();
    let rows = lines(&dir.path().join("run_seed1.csv"));
    for row in &rows[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        let it: usize = fields[0].parse().unwrap();
        let evaluated = it % 3 == 0 || it == 7;
        assert_eq!(!fields[4].is_empty(), evaluated, "{row}");
        assert_eq!(!fields[5].is_empty(), evaluated, "{row}");
        assert!(fields[7].is_empty(), "wallclock recorded by default: {row}");
    }
}

#[test]
fn q1_writes_one_curve_per_split_and_a_ranking() {
    let dir = tempfile::tempdir().unwrap();
    let report = sweep_q1(&config("", dir.path()), 16, &[2, 4, 8]).unwrap();
    assert_eq!(report.points.len(), 3);
    assert_eq!(
        csv_files(dir.path()),
        ["q1_b1_2_seed1.csv", "q1_b1_4_seed1.csv", "q1_b1_8_seed1.csv", "q1_summary.csv"]
    );
    let summary = lines(&report.summary_path);
    assert_eq!(summary.len(), 4);
    let mut ranks: Vec<String> = summary[1..].iter().map(|r| r.rsplit(',').next().unwrap().to_owned()).collect();
    ranks.sort();
    assert_eq!(ranks, ["1", "2", "3"]);
}

#[test]
fn q1_degenerate_and_infeasible_splits() {
    let dir = tempfile::tempdir().unwrap();
    let report = sweep_q1(&config("", dir.path()), 16, &[8]).unwrap();
    assert_eq!(report.points.len(), 1);
    assert!(matches!(sweep_q1(&config("", dir.path()), 16, &[16]), Err(HarnessError::Config(_))));
}

#[test]
fn q2_single_batch_size_and_trivial_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("run.seeds = 1,2", dir.path());
    let report = sweep_q2(&cfg, &[8], f64::INFINITY).unwrap();
    assert_eq!(lines(&report.summary_path).len(), 2);

    let f0 = report.points[0].runs[0].initial_f;
    let report = sweep_q2(&cfg, &[4, 8], f0).unwrap();
    for p in &report.points {
        assert!(p.runs.iter().all(|r| r.iterations_to(f0) == 0));
    }
    let unreachable = sweep_q2(&cfg, &[4], -2.0).unwrap();
    assert_eq!(unreachable.points[0].runs[0].iterations_to(-2.0), 21);
}

#[test]
fn gamma_sweep_single_value_and_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let report = sweep_gamma(&config("", dir.path()), &[1.0]).unwrap();
    assert_eq!(report.points.len(), 1);
    let report = sweep_gamma(&config("", dir.path()), &[0.5, 1.0, 0.5]).unwrap();
    let labels: Vec<&str> = report.points.iter().map(|p| p.label.as_str()).collect();
    assert_eq!(labels, ["gamma_0.5", "gamma_1"]);
    assert!(sweep_gamma(&config("", dir.path()), &[0.0]).is_err());
}

#[test]
fn compare_degenerate_and_repeated() {
    let dir = tempfile::tempdir().unwrap();
    let report = compare_optimizers(&config("", dir.path()), &[MethodKind::Sox]).unwrap();
    assert_eq!(report.points.len(), 1);

    let report = compare_optimizers(&config("run.seeds = 1,2", dir.path()), &[MethodKind::Sox, MethodKind::Sox]).unwrap();
    assert_eq!(report.points[1].label, "sox_2");
    let (a, b) = (&report.points[0].runs, &report.points[1].runs);
    for (x, y) in a.iter().zip(b) {
        assert_eq!(x.records, y.records);
    }
    let curve = |label: &str| fs::read(dir.path().join(format!("compare_{label}_seed2.csv"))).unwrap();
    assert_eq!(curve("sox"), curve("sox_2"));
}

#[test]
fn compare_consumes_equal_oracle_budgets() {
    let dir = tempfile::tempdir().unwrap();
    let kinds = [MethodKind::Sox, MethodKind::Soap, MethodKind::Moap, MethodKind::Bsgd];
    let report = compare_optimizers(&config("", dir.path()), &kinds).unwrap();
    let used: Vec<u64> = report.points.iter().map(|p| p.runs[0].records.last().unwrap().inner_oracle_count).collect();
    assert!(used.windows(2).all(|w| w[0] == w[1]), "{used:?}");
}

#[test]
fn pd_sox_on_ap_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = compare_optimizers(&config("", dir.path()), &[MethodKind::Sox, MethodKind::PdSox]).unwrap_err();
    assert!(matches!(err, HarnessError::Core(_)), "{err}");
}

#[test]
fn abort_leaves_a_diagnostic_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "objective.kind = ap\nobjective.loss = exponential\ndata.n_pos = 6\ndata.n_neg = 18\ndata.dim = 3\n\
         optimizer.eta = 1000\noptimizer.iters = 50\nbatch.outer = 2\nbatch.inner = 4\n\
         run.eval_every = 1\noutput.dir = {}\n",
        dir.path().display()
    );
    let report = run_experiment(&ExperimentConfig::from_text(&text).unwrap()).unwrap();
    assert!(!report.all_completed());
    let rows = lines(&dir.path().join("run_seed1.csv"));
    let last = rows.last().unwrap();
    assert!(last.starts_with("# aborted at iteration "), "{last}");
    let iteration: usize = last["# aborted at iteration ".len()..].split(':').next().unwrap().parse().unwrap();
    assert_eq!(rows.len(), iteration + 1, "one header, completed rows, then the diagnostic");
}
