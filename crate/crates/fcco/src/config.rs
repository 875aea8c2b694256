//! Flat `section.key = value` experiment files.
//!
//! ```text
//! # AP maximization on a synthetic imbalanced toy
//! objective.kind = ap
//! data.n_pos = 20
//! data.n_neg = 80
//! optimizer.kind = sox
//! optimizer.eta = 0.1
//! batch.outer = 8
//! batch.inner = 8
//! run.seeds = 1, 2, 3
//! ```
//!
//! Booleans are `true`/`false`, lists are comma-separated, strings are
//! unquoted. Unknown keys are rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fcco_core::objectives::SurrogateLoss;
use fcco_core::optim::{default_lr_decay, BoostConfig, Method, PdSoxConfig, SoxConfig, DEFAULT_BETA};
use fcco_core::BatchSpec;

use crate::error::{HarnessError, Result};

/// Parsed key/value pairs with the line each came from.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            let line_no = k + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (key, value) = text.split_once('=').ok_or_else(|| HarnessError::ConfigSyntax {
                line: line_no,
                message: "expected `section.key = value`".into(),
            })?;
            let key = key.trim();
            if !key.contains('.') || key.starts_with('.') || key.ends_with('.') {
                return Err(HarnessError::ConfigSyntax {
                    line: line_no,
                    message: format!("key `{key}` is not of the form section.key"),
                });
            }
            if entries.insert(key.to_owned(), (value.trim().to_owned(), line_no)).is_some() {
                return Err(HarnessError::ConfigSyntax { line: line_no, message: format!("duplicate key `{key}`") });
            }
        }
        Ok(RawConfig { entries })
    }

    /// Sets or replaces a value (used for command-line overrides).
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_owned(), (value.into(), 0));
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Typed access that remembers which keys were read.
struct Reader<'a> {
    raw: &'a RawConfig,
    used: BTreeSet<String>,
}

fn bad(key: &str, message: impl Into<String>) -> HarnessError {
    HarnessError::ConfigValue { key: key.to_owned(), message: message.into() }
}

impl<'a> Reader<'a> {
    fn new(raw: &'a RawConfig) -> Self {
        Reader { raw, used: BTreeSet::new() }
    }

    fn get<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.used.insert(key.to_owned());
        match self.raw.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| bad(key, format!("cannot parse `{v}`"))),
        }
    }

    fn or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn string(&mut self, key: &str) -> Option<String> {
        self.used.insert(key.to_owned());
        self.raw.raw(key).map(str::to_owned)
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>> {
        self.used.insert(key.to_owned());
        let Some(v) = self.raw.raw(key) else { return Ok(None) };
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| bad(key, format!("cannot parse list item `{s}`"))))
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    fn finish(self) -> Result<()> {
        match self.raw.keys().find(|k| !self.used.contains(*k)) {
            Some(k) => Err(HarnessError::UnknownKey(k.to_owned())),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    Ap,
    PnormPush,
    Nca,
    ListNet,
}

impl FromStr for ObjectiveKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "ap" => Ok(ObjectiveKind::Ap),
            "pnorm_push" | "pnorm" => Ok(ObjectiveKind::PnormPush),
            "nca" => Ok(ObjectiveKind::Nca),
            "listnet" => Ok(ObjectiveKind::ListNet),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    pub loss: SurrogateLoss,
    /// Power of the p-norm push.
    pub p: f64,
    /// Rank of the NCA projection.
    pub rank: usize,
    /// Constrain `w` to the ball of this radius.
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// Two Gaussian classes (ranking objectives).
    Ranking { n_pos: usize, n_neg: usize, dim: usize, separation: f64, noise: f64 },
    /// Gaussian blobs (NCA).
    Clusters { n_per_class: usize, n_classes: usize, dim: usize, spread: f64 },
    /// Random queries with graded relevance (ListNet).
    Queries { n_queries: usize, items: usize, dim: usize },
    /// LibSVM file; labels above `threshold` are positive for ranking objectives.
    Libsvm { path: PathBuf, threshold: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataSpec {
    pub source: DataSource,
    /// Seed for generation and splitting, independent of the run seeds.
    pub seed: u64,
    /// Held-out fraction for the AP metric (ranking objectives only); 0 evaluates on training data.
    pub test_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Sox,
    Soap,
    Moap,
    Bsgd,
    SoxBoost,
    PdSox,
}

impl MethodKind {
    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Sox => "sox",
            MethodKind::Soap => "soap",
            MethodKind::Moap => "moap",
            MethodKind::Bsgd => "bsgd",
            MethodKind::SoxBoost => "sox_boost",
            MethodKind::PdSox => "pd_sox",
        }
    }
}

impl FromStr for MethodKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "sox" => Ok(MethodKind::Sox),
            "soap" => Ok(MethodKind::Soap),
            "moap" => Ok(MethodKind::Moap),
            "bsgd" => Ok(MethodKind::Bsgd),
            "sox_boost" | "sox-boost" => Ok(MethodKind::SoxBoost),
            "pd_sox" | "pd-sox" => Ok(MethodKind::PdSox),
            _ => Err(()),
        }
    }
}

/// Optimizer settings; each kind reads the fields it needs.
///
/// For SOX-boost, `eta`, `beta`, `gamma` and `iters` are the stage-1 values.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerSpec {
    pub kind: MethodKind,
    pub eta: f64,
    pub beta: f64,
    pub gamma: f64,
    pub iters: usize,
    pub lr_decay: Vec<(f64, f64)>,
    pub stages: usize,
    pub mu_reg: f64,
    pub tau: f64,
    pub radius: Option<f64>,
    /// Pick `eta` from [`LR_GRID`] by final training loss before running.
    pub tune: bool,
}

/// Learning-rate grid searched when tuning.
pub const LR_GRID: [f64; 4] = [1e-4, 1e-3, 1e-2, 1e-1];

impl OptimizerSpec {
    pub fn method(&self, batch: BatchSpec) -> Method {
        let single = || {
            SoxConfig::new(self.eta, self.gamma, self.iters, batch)
                .with_beta(self.beta)
                .with_lr_decay(self.lr_decay.clone())
        };
        match self.kind {
            MethodKind::Sox => Method::Sox(single()),
            MethodKind::Soap => Method::Soap(single()),
            MethodKind::Moap => Method::Moap(single()),
            MethodKind::Bsgd => Method::Bsgd(single()),
            MethodKind::SoxBoost => Method::SoxBoost(BoostConfig {
                stages: self.stages,
                eta1: self.eta,
                beta1: self.beta,
                gamma1: self.gamma,
                iters1: self.iters,
                batch,
                mu_reg: self.mu_reg,
            }),
            MethodKind::PdSox => {
                Method::PdSox(PdSoxConfig { eta: self.eta, tau: self.tau, iters: self.iters, batch, radius: self.radius })
            }
        }
    }

    /// Sets the iteration count so a run consumes about `budget` inner oracles.
    pub fn apply_budget(&mut self, budget: u64, batch: BatchSpec) {
        let per_iter = (batch.outer * batch.inner) as u64;
        let total = (budget / per_iter).max(1) as usize;
        self.iters = match self.kind {
            // stage k runs iters · 2^{k-1}, so K stages run iters · (2^K - 1)
            MethodKind::SoxBoost => (total / ((1usize << self.stages) - 1)).max(1),
            _ => total,
        };
    }
}

/// Settings for the sweep commands.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSpec {
    pub b_total: Option<usize>,
    pub b1_list: Vec<usize>,
    pub b_list: Vec<usize>,
    pub threshold: Option<f64>,
    pub gamma_list: Vec<f64>,
    pub optimizers: Vec<MethodKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    Zeros,
    /// Identity-like `A = [I | 0]` for NCA.
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub objective: ObjectiveSpec,
    pub data: DataSpec,
    pub optimizer: OptimizerSpec,
    pub batch: BatchSpec,
    pub seeds: Vec<u64>,
    pub eval_every: usize,
    pub init: Init,
    pub output: PathBuf,
    /// Fill the wallclock column; off by default so reruns are byte-identical.
    pub record_time: bool,
    pub sweep: SweepSpec,
}

fn parse_decay(key: &str, text: &str) -> Result<Vec<(f64, f64)>> {
    if text == "none" {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (f, m) = item.split_once(':').ok_or_else(|| bad(key, format!("expected fraction:multiplier, got `{item}`")))?;
            let f = f.trim().parse().map_err(|_| bad(key, format!("bad fraction `{f}`")))?;
            let m = m.trim().parse().map_err(|_| bad(key, format!("bad multiplier `{m}`")))?;
            Ok((f, m))
        })
        .collect()
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::File { path: path.to_owned(), source })?;
        let raw = RawConfig::parse(&text)?;
        let mut cfg = ExperimentConfig::from_raw(&raw)?;
        // relative data paths are resolved against the config file
        if let DataSource::Libsvm { path: data, .. } = &mut cfg.data.source {
            if data.is_relative() {
                if let Some(dir) = path.parent() {
                    *data = dir.join(&*data);
                }
            }
        }
        cfg.check_files()?;
        Ok(cfg)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        ExperimentConfig::from_raw(&RawConfig::parse(text)?)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let mut r = Reader::new(raw);

        let kind_text = r.string("objective.kind").ok_or_else(|| bad("objective.kind", "required"))?;
        let kind: ObjectiveKind =
            kind_text.parse().map_err(|_| bad("objective.kind", format!("unknown objective `{kind_text}`")))?;
        let default_loss = if kind == ObjectiveKind::PnormPush { "exponential" } else { "squared_hinge" };
        let loss = match r.string("objective.loss").as_deref().unwrap_or(default_loss) {
            "exponential" | "exp" => SurrogateLoss::Exponential,
            "squared_hinge" => SurrogateLoss::SquaredHinge { margin: r.or("objective.margin", 1.0)? },
            other => return Err(bad("objective.loss", format!("unknown loss `{other}`"))),
        };
        let objective = ObjectiveSpec {
            kind,
            loss,
            p: r.or("objective.p", 4.0)?,
            rank: r.or("objective.rank", 2)?,
            radius: r.get("objective.radius")?,
        };
        if objective.radius.is_some_and(|r| !(r > 0.0 && r.is_finite())) {
            return Err(bad("objective.radius", "must be > 0"));
        }

        let default_source = match kind {
            ObjectiveKind::Ap | ObjectiveKind::PnormPush => "ranking",
            ObjectiveKind::Nca => "clusters",
            ObjectiveKind::ListNet => "queries",
        };
        let source = match r.string("data.source").as_deref().unwrap_or(default_source) {
            "ranking" => DataSource::Ranking {
                n_pos: r.or("data.n_pos", 20)?,
                n_neg: r.or("data.n_neg", 80)?,
                dim: r.or("data.dim", 5)?,
                separation: r.or("data.separation", 1.0)?,
                noise: r.or("data.noise", 1.0)?,
            },
            "clusters" => DataSource::Clusters {
                n_per_class: r.or("data.n_per_class", 10)?,
                n_classes: r.or("data.n_classes", 3)?,
                dim: r.or("data.dim", 4)?,
                spread: r.or("data.spread", 1.0)?,
            },
            "queries" => DataSource::Queries {
                n_queries: r.or("data.n_queries", 10)?,
                items: r.or("data.items", 8)?,
                dim: r.or("data.dim", 5)?,
            },
            "libsvm" => DataSource::Libsvm {
                path: r.string("data.path").ok_or_else(|| bad("data.path", "required for libsvm data"))?.into(),
                threshold: r.or("data.threshold", 0.0)?,
            },
            other => return Err(bad("data.source", format!("unknown source `{other}`"))),
        };
        let data = DataSpec { source, seed: r.or("data.seed", 0)?, test_fraction: r.or("data.test_fraction", 0.0)? };
        if !(0.0..1.0).contains(&data.test_fraction) {
            return Err(bad("data.test_fraction", "must lie in [0, 1)"));
        }
        if matches!(data.source, DataSource::Libsvm { .. }) && kind == ObjectiveKind::ListNet {
            return Err(bad("data.source", "listnet needs query-grouped data; use data.source = queries"));
        }

        let method_text = r.string("optimizer.kind").unwrap_or_else(|| "sox".into());
        let method: MethodKind =
            method_text.parse().map_err(|_| bad("optimizer.kind", format!("unknown optimizer `{method_text}`")))?;
        let lr_decay = match r.string("optimizer.lr_decay") {
            Some(text) => parse_decay("optimizer.lr_decay", &text)?,
            None => default_lr_decay(),
        };
        let optimizer = OptimizerSpec {
            kind: method,
            eta: r.or("optimizer.eta", 0.01)?,
            beta: r.or("optimizer.beta", DEFAULT_BETA)?,
            gamma: r.or("optimizer.gamma", 0.9)?,
            iters: r.or("optimizer.iters", 1000)?,
            lr_decay,
            stages: r.or("optimizer.stages", 4)?,
            mu_reg: r.or("optimizer.mu_reg", 0.0)?,
            tau: r.or("optimizer.tau", 1.0)?,
            radius: r.get("optimizer.radius")?,
            tune: r.or("optimizer.tune", false)?,
        };

        let batch = BatchSpec::new(r.or("batch.outer", 8)?, r.or("batch.inner", 8)?);
        let seeds = r.list("run.seeds")?.unwrap_or_else(|| vec![1]);
        if seeds.is_empty() {
            return Err(bad("run.seeds", "at least one seed is required"));
        }
        let eval_every = r.or("run.eval_every", 10)?;
        if eval_every == 0 {
            return Err(bad("run.eval_every", "must be >= 1"));
        }
        let default_init = if kind == ObjectiveKind::Nca { "identity" } else { "zeros" };
        let init = match r.string("run.init").as_deref().unwrap_or(default_init) {
            "zeros" => Init::Zeros,
            "identity" => Init::Identity,
            other => return Err(bad("run.init", format!("unknown init `{other}`"))),
        };

        let output = r.string("output.dir").unwrap_or_else(|| "fcco-out".into()).into();
        let record_time = r.or("output.record_time", false)?;

        let optimizers = match r.list::<String>("sweep.optimizers")? {
            None => Vec::new(),
            Some(names) => names
                .iter()
                .map(|n| n.parse().map_err(|_| bad("sweep.optimizers", format!("unknown optimizer `{n}`"))))
                .collect::<Result<_>>()?,
        };
        let sweep = SweepSpec {
            b_total: r.get("sweep.b_total")?,
            b1_list: r.list("sweep.b1_list")?.unwrap_or_default(),
            b_list: r.list("sweep.b_list")?.unwrap_or_default(),
            threshold: r.get("sweep.threshold")?,
            gamma_list: r.list("sweep.gamma_list")?.unwrap_or_default(),
            optimizers,
        };
        r.finish()?;

        Ok(ExperimentConfig {
            objective,
            data,
            optimizer,
            batch,
            seeds,
            eval_every,
            init,
            output,
            record_time,
            sweep,
        })
    }

    pub fn check_files(&self) -> Result<()> {
        if let DataSource::Libsvm { path, .. } = &self.data.source {
            if !path.is_file() {
                return Err(HarnessError::Config(format!("data file {} does not exist", path.display())));
            }
        }
        Ok(())
    }

    pub fn method(&self) -> Method {
        self.optimizer.method(self.batch)
    }
}
