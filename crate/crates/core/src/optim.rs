//! SOX and its relatives.
//!
//! All optimizers share one sampling path ([`sample_batches`]) and one step
//! routine ([`RunState::step`]); they differ only in which inner-value
//! estimate feeds `∇f_i` and whether gradient momentum is applied:
//!
//! | method | estimate fed to `∇f_i`        | momentum |
//! |--------|-------------------------------|----------|
//! | SOX    | tracker row *before* update   | yes      |
//! | SOAP   | tracker row *after* update    | no       |
//! | MOAP   | scaled-decay row after update | yes      |
//! | BSGD   | the fresh batch mean          | no       |

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math;
pub use crate::problem::project_ball;
use crate::problem::{batch_vjp, check_index, g_batch, BatchSpec, FccoProblem, ParamVector, Ridge};
use crate::tracker::{MomentumVector, TrackerTable};

/// Default momentum parameter (`1 - β` is the classic 0.9 momentum).
pub const DEFAULT_BETA: f64 = 0.1;

/// Default step-size decay: ×0.1 at half and at three quarters of the run.
pub fn default_lr_decay() -> Vec<(f64, f64)> {
    vec![(0.5, 0.1), (0.75, 0.1)]
}

/// Which inner-value estimator and gradient rule a single-stage run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Sox,
    Soap,
    Moap,
    Bsgd,
}

impl Estimator {
    fn uses_momentum(self) -> bool {
        matches!(self, Estimator::Sox | Estimator::Moap)
    }
}

/// Hyperparameters shared by the single-stage optimizers.
///
/// SOAP and BSGD ignore `beta`; BSGD also ignores `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct SoxConfig {
    pub eta: f64,
    pub beta: f64,
    pub gamma: f64,
    pub iters: usize,
    pub batch: BatchSpec,
    /// `(fraction of iters, multiplier)` pairs; fractions strictly increasing in (0, 1).
    pub lr_decay: Vec<(f64, f64)>,
}

impl SoxConfig {
    pub fn new(eta: f64, gamma: f64, iters: usize, batch: BatchSpec) -> Self {
        SoxConfig { eta, beta: DEFAULT_BETA, gamma, iters, batch, lr_decay: default_lr_decay() }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_lr_decay(mut self, lr_decay: Vec<(f64, f64)>) -> Self {
        self.lr_decay = lr_decay;
        self
    }

    /// Constant step size for the whole run.
    pub fn without_decay(self) -> Self {
        self.with_lr_decay(Vec::new())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidConfig(format!("eta must be finite and >= 0, got {}", self.eta)));
        }
        check_unit("beta", self.beta)?;
        check_unit("gamma", self.gamma)?;
        if self.iters == 0 {
            return Err(Error::InvalidConfig("iters must be >= 1".into()));
        }
        let mut last = 0.0;
        for &(frac, mult) in &self.lr_decay {
            if !(frac > last && frac < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "decay fractions must be strictly increasing in (0, 1), got {frac}"
                )));
            }
            if !(mult > 0.0 && mult.is_finite()) {
                return Err(Error::InvalidConfig(format!("decay multiplier must be > 0, got {mult}")));
            }
            last = frac;
        }
        Ok(())
    }

    /// Step size used at 1-based iteration `t`.
    pub fn step_size(&self, t: usize) -> f64 {
        let done = (t - 1) as f64;
        let total = self.iters as f64;
        self.lr_decay
            .iter()
            .filter(|(frac, _)| done >= frac * total)
            .fold(self.eta, |eta, (_, mult)| eta * mult)
    }
}

fn check_unit(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value <= 1.0) {
        return Err(Error::InvalidConfig(format!("{name} must lie in (0, 1], got {value}")));
    }
    Ok(())
}

/// Stagewise restart schedule.
///
/// Stage `k` (1-based) uses `η_k = η_1 / 2^{k-1}`, `T_k = T_1 · 2^{k-1}`, and
/// `β_k`, `γ_k` proportional to `η_k` with the stage-1 values fixing the
/// constants, clamped to `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostConfig {
    pub stages: usize,
    pub eta1: f64,
    pub beta1: f64,
    pub gamma1: f64,
    pub iters1: usize,
    pub batch: BatchSpec,
    /// Ridge coefficient `μ`; with `μ > 0` the run optimizes `F(w) + (μ/2)‖w‖²`.
    pub mu_reg: f64,
}

/// Hyperparameters of one SOX-boost stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageParams {
    pub eta: f64,
    pub beta: f64,
    pub gamma: f64,
    pub iters: usize,
}

impl BoostConfig {
    pub fn validate(&self) -> Result<()> {
        if self.stages == 0 {
            return Err(Error::InvalidConfig("stages must be >= 1".into()));
        }
        if !(self.mu_reg >= 0.0 && self.mu_reg.is_finite()) {
            return Err(Error::InvalidConfig(format!("mu_reg must be >= 0, got {}", self.mu_reg)));
        }
        for k in 1..=self.stages {
            self.stage_config(k).validate()?;
        }
        Ok(())
    }

    pub fn stage(&self, k: usize) -> StageParams {
        let shrink = libm::ldexp(1.0, -((k - 1) as i32));
        StageParams {
            eta: self.eta1 * shrink,
            beta: (self.beta1 * shrink).min(1.0),
            gamma: (self.gamma1 * shrink).min(1.0),
            iters: self.iters1 << (k - 1),
        }
    }

    fn stage_config(&self, k: usize) -> SoxConfig {
        let s = self.stage(k);
        SoxConfig::new(s.eta, s.gamma, s.iters, self.batch).with_beta(s.beta).without_decay()
    }

    pub fn total_iters(&self) -> usize {
        (1..=self.stages).map(|k| self.stage(k).iters).sum()
    }
}

/// Primal-dual SOX: `β = 1`, `γ = 1/(1+τ)`, projection onto a Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct PdSoxConfig {
    pub eta: f64,
    pub tau: f64,
    pub iters: usize,
    pub batch: BatchSpec,
    /// Ball radius around the origin; `None` leaves `w` unconstrained.
    pub radius: Option<f64>,
}

impl PdSoxConfig {
    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 + self.tau)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) {
            return Err(Error::InvalidConfig(format!("tau must be > 0, got {}", self.tau)));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidConfig(format!("radius must be > 0, got {r}")));
            }
        }
        self.as_sox().validate()
    }

    fn as_sox(&self) -> SoxConfig {
        // γ underflows to 0 only for absurd τ; keep it strictly positive.
        let gamma = self.gamma().max(f64::MIN_POSITIVE);
        SoxConfig::new(self.eta, gamma, self.iters, self.batch).with_beta(1.0).without_decay()
    }
}

/// One optimizer iteration as seen from outside.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// 1-based, strictly increasing across stages.
    pub iteration: usize,
    /// 1-based stage (always 1 outside SOX-boost).
    pub stage: usize,
    pub step_size: f64,
    /// Cumulative inner-oracle (`g_sample`) evaluations.
    pub inner_oracles: u64,
    /// Cumulative rows decayed without an oracle call (MOAP only).
    pub decay_touches: u64,
    /// Norm of the direction actually applied to `w`.
    pub direction_norm: f64,
}

/// Result of a completed run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub w: ParamVector,
    /// Uniform average of the iterates `w^1..w^T` (primal-dual SOX only).
    pub w_avg: Option<ParamVector>,
    /// Parameter at the end of each stage.
    pub stage_ends: Vec<ParamVector>,
    pub records: Vec<StepRecord>,
    pub tracker: TrackerTable,
}

/// Draws `B1` outer indices and, for each, `B2` inner indices, all uniformly
/// without replacement. Index lists are returned sorted.
pub fn sample_batches<P, R>(problem: &P, batch: BatchSpec, rng: &mut R) -> (Vec<usize>, Vec<Vec<usize>>)
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    let mut outer = rand::seq::index::sample(rng, problem.n_outer(), batch.outer).into_vec();
    outer.sort_unstable();
    let inner = outer
        .iter()
        .map(|&i| {
            let mut b = rand::seq::index::sample(rng, problem.inner_size(i), batch.inner).into_vec();
            b.sort_unstable();
            b
        })
        .collect();
    (outer, inner)
}

/// Mutable optimizer state carried across iterations and stages.
#[derive(Debug, Clone)]
pub struct RunState {
    pub w: ParamVector,
    pub tracker: TrackerTable,
    pub momentum: MomentumVector,
    pub inner_oracles: u64,
    pub decay_touches: u64,
    pub iteration: usize,
    pub stage: usize,
    radius: Option<f64>,
}

impl RunState {
    pub fn new<P: FccoProblem + ?Sized>(problem: &P, w0: &[f64], gamma: f64, beta: f64) -> Result<Self> {
        if w0.len() != problem.dim_w() {
            return Err(Error::LengthMismatch { expected: problem.dim_w(), found: w0.len() });
        }
        if let Some(k) = w0.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { what: "initial parameter", index: k });
        }
        Ok(RunState {
            w: ParamVector::from(w0),
            tracker: TrackerTable::new(problem.n_outer(), problem.d_prime(), gamma),
            momentum: MomentumVector::new(problem.dim_w(), beta),
            inner_oracles: 0,
            decay_touches: 0,
            iteration: 0,
            stage: 1,
            radius: None,
        })
    }

    /// MOAP keeps a dense table from the start: `u⁰ = 0` on every row.
    fn for_moap<P: FccoProblem + ?Sized>(problem: &P, w0: &[f64], gamma: f64, beta: f64) -> Result<Self> {
        let mut state = RunState::new(problem, w0, gamma, beta)?;
        state.tracker =
            TrackerTable::from_rows(vec![0.0; problem.n_outer() * problem.d_prime()], problem.d_prime(), gamma)?;
        Ok(state)
    }

    /// Runs one iteration on explicitly given batches.
    ///
    /// Errors are returned unwrapped; the run drivers attach the iteration.
    pub fn step_on<P: FccoProblem + ?Sized>(
        &mut self,
        problem: &P,
        estimator: Estimator,
        eta: f64,
        outer: &[usize],
        inner: &[Vec<usize>],
    ) -> Result<StepRecord> {
        if outer.is_empty() {
            return Err(Error::EmptyOuterBatch);
        }
        if outer.len() != inner.len() {
            return Err(Error::LengthMismatch { expected: outer.len(), found: inner.len() });
        }
        for &i in outer {
            check_index(problem, i)?;
        }
        let dp = problem.d_prime();
        let b1 = outer.len() as f64;
        let scale = 1.0 / b1;
        let mut grad = vec![0.0; problem.dim_w()];
        let mut a = vec![0.0; dp];

        if estimator == Estimator::Moap {
            let mut ghat = Vec::with_capacity(outer.len() * dp);
            for (&i, batch) in outer.iter().zip(inner) {
                ghat.extend(g_batch(problem, &self.w, i, batch)?);
            }
            self.tracker.moap_update(outer, &ghat, problem.n_outer())?;
            for (&i, batch) in outer.iter().zip(inner) {
                problem.f_grad(i, self.tracker.row(i)?, &mut a)?;
                check_finite(&a, "outer gradient", i)?;
                batch_vjp(problem, &self.w, i, batch, &a, scale, &mut grad);
            }
        } else {
            for (&i, batch) in outer.iter().zip(inner) {
                let ghat = g_batch(problem, &self.w, i, batch)?;
                match estimator {
                    Estimator::Sox => {
                        let upd = self.tracker.sox_update(i, &ghat)?;
                        problem.f_grad(i, &upd.prev, &mut a)?;
                    }
                    Estimator::Soap => {
                        let upd = self.tracker.sox_update(i, &ghat)?;
                        problem.f_grad(i, &upd.new, &mut a)?;
                    }
                    Estimator::Bsgd => problem.f_grad(i, &ghat, &mut a)?,
                    Estimator::Moap => unreachable!(),
                }
                check_finite(&a, "outer gradient", i)?;
                batch_vjp(problem, &self.w, i, batch, &a, scale, &mut grad);
            }
        }
        problem.regularizer_grad(&self.w, &mut grad);

        let direction: Vec<f64> =
            if estimator.uses_momentum() { self.momentum.update(&grad)?.to_vec() } else { grad };
        for (w, d) in self.w.iter_mut().zip(&direction) {
            *w -= eta * d;
        }
        problem.project(&mut self.w);
        if let Some(r) = self.radius {
            project_ball(&mut self.w, r);
        }
        if let Some(k) = self.w.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { what: "parameter", index: k });
        }

        let oracles: usize = inner.iter().map(Vec::len).sum();
        self.inner_oracles += oracles as u64;
        if estimator == Estimator::Moap {
            self.decay_touches += (problem.n_outer() - outer.len()) as u64;
        }
        self.iteration += 1;
        Ok(StepRecord {
            iteration: self.iteration,
            stage: self.stage,
            step_size: eta,
            inner_oracles: self.inner_oracles,
            decay_touches: self.decay_touches,
            direction_norm: math::norm2(&direction),
        })
    }

    /// Samples batches from `rng` and runs one iteration.
    pub fn step<P: FccoProblem + ?Sized, R: Rng + ?Sized>(
        &mut self,
        problem: &P,
        estimator: Estimator,
        eta: f64,
        batch: BatchSpec,
        rng: &mut R,
    ) -> Result<StepRecord> {
        let (outer, inner) = sample_batches(problem, batch, rng);
        self.step_on(problem, estimator, eta, &outer, &inner)
    }
}

fn check_finite(v: &[f64], what: &'static str, index: usize) -> Result<()> {
    if math::all_finite(v) {
        Ok(())
    } else {
        Err(Error::NonFinite { what, index })
    }
}

/// Callback invoked after every accepted step with the new parameter.
pub type Monitor<'a> = dyn FnMut(&StepRecord, &[f64]) + 'a;

fn run_stage<P, R>(
    problem: &P,
    state: &mut RunState,
    estimator: Estimator,
    config: &SoxConfig,
    rng: &mut R,
    records: &mut Vec<StepRecord>,
    monitor: &mut Monitor<'_>,
    mut before_step: impl FnMut(&[f64]),
) -> Result<()>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    for t in 1..=config.iters {
        before_step(&state.w);
        let eta = config.step_size(t);
        let record = state
            .step(problem, estimator, eta, config.batch, rng)
            .map_err(|e| Error::Aborted { iteration: state.iteration + 1, source: Box::new(e) })?;
        monitor(&record, &state.w);
        records.push(record);
    }
    Ok(())
}

fn run_single<P, R>(
    problem: &P,
    w0: &[f64],
    estimator: Estimator,
    config: &SoxConfig,
    rng: &mut R,
    monitor: &mut Monitor<'_>,
) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    config.validate()?;
    config.batch.validate(problem)?;
    let mut state = if estimator == Estimator::Moap {
        RunState::for_moap(problem, w0, config.gamma, config.beta)?
    } else {
        RunState::new(problem, w0, config.gamma, config.beta)?
    };
    let mut records = Vec::with_capacity(config.iters);
    run_stage(problem, &mut state, estimator, config, rng, &mut records, monitor, |_| {})?;
    Ok(RunOutput {
        stage_ends: vec![state.w.clone()],
        w: state.w,
        w_avg: None,
        records,
        tracker: state.tracker,
    })
}

/// SOX: selective tracker update, gradient momentum, `∇f_i` at the pre-update row.
pub fn sox_run<P, R>(problem: &P, w0: &[f64], config: &SoxConfig, rng: &mut R) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    run_single(problem, w0, Estimator::Sox, config, rng, &mut |_, _| {})
}

/// SOAP: selective tracker update, no momentum, `∇f_i` at the post-update row.
pub fn soap_run<P, R>(problem: &P, w0: &[f64], config: &SoxConfig, rng: &mut R) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    run_single(problem, w0, Estimator::Soap, config, rng, &mut |_, _| {})
}

/// MOAP: every row decays each step, sampled rows get the `n/B1`-scaled estimate.
pub fn moap_run<P, R>(problem: &P, w0: &[f64], config: &SoxConfig, rng: &mut R) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    run_single(problem, w0, Estimator::Moap, config, rng, &mut |_, _| {})
}

/// BSGD: plug-in batch estimate inside `∇f_i`, no tracker, no momentum.
pub fn bsgd_run<P, R>(problem: &P, w0: &[f64], config: &SoxConfig, rng: &mut R) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    run_single(problem, w0, Estimator::Bsgd, config, rng, &mut |_, _| {})
}

fn boost_inner<P, R>(
    problem: &P,
    w0: &[f64],
    config: &BoostConfig,
    rng: &mut R,
    monitor: &mut Monitor<'_>,
) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    config.batch.validate(problem)?;
    let first = config.stage(1);
    let mut state = RunState::new(problem, w0, first.gamma, first.beta)?;
    let mut records = Vec::with_capacity(config.total_iters());
    let mut stage_ends = Vec::with_capacity(config.stages);
    for k in 1..=config.stages {
        let stage = config.stage_config(k);
        state.stage = k;
        state.tracker.set_gamma(stage.gamma);
        state.momentum.set_beta(stage.beta);
        run_stage(problem, &mut state, Estimator::Sox, &stage, rng, &mut records, monitor, |_| {})?;
        stage_ends.push(state.w.clone());
    }
    Ok(RunOutput { w: state.w, w_avg: None, stage_ends, records, tracker: state.tracker })
}

/// SOX-boost: `stages` SOX restarts with a halving step size and a doubling
/// stage length; tracker and momentum carry over between stages.
pub fn sox_boost_run<P, R>(problem: &P, w0: &[f64], config: &BoostConfig, rng: &mut R) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    sox_boost_run_monitored(problem, w0, config, rng, &mut |_, _| {})
}

fn sox_boost_run_monitored<P, R>(
    problem: &P,
    w0: &[f64],
    config: &BoostConfig,
    rng: &mut R,
    monitor: &mut Monitor<'_>,
) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    config.validate()?;
    if config.mu_reg > 0.0 {
        boost_inner(&Ridge::new(problem, config.mu_reg), w0, config, rng, monitor)
    } else {
        boost_inner(problem, w0, config, rng, monitor)
    }
}

/// Primal-dual SOX. Returns the averaged iterate in `w_avg` and the last
/// iterate in `w`.
pub fn pd_sox_run<P, R>(problem: &P, w0: &[f64], config: &PdSoxConfig, rng: &mut R) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    pd_sox_run_monitored(problem, w0, config, rng, &mut |_, _| {})
}

fn pd_sox_run_monitored<P, R>(
    problem: &P,
    w0: &[f64],
    config: &PdSoxConfig,
    rng: &mut R,
    monitor: &mut Monitor<'_>,
) -> Result<RunOutput>
where
    P: FccoProblem + ?Sized,
    R: Rng + ?Sized,
{
    if problem.d_prime() != 1 {
        return Err(Error::ScalarInnerRequired);
    }
    if !problem.is_monotone_convex() {
        return Err(Error::NotMonotoneConvex);
    }
    config.validate()?;
    config.batch.validate(problem)?;
    let sox = config.as_sox();
    let mut state = RunState::new(problem, w0, sox.gamma, 1.0)?;
    state.radius = config.radius;
    if let Some(r) = config.radius {
        project_ball(&mut state.w, r);
    }
    let mut sum = vec![0.0; problem.dim_w()];
    let mut records = Vec::with_capacity(config.iters);
    run_stage(problem, &mut state, Estimator::Sox, &sox, rng, &mut records, monitor, |w| {
        for (s, x) in sum.iter_mut().zip(w) {
            *s += x;
        }
    })?;
    let count = config.iters as f64;
    let avg: Vec<f64> = sum.into_iter().map(|s| s / count).collect();
    Ok(RunOutput {
        stage_ends: vec![state.w.clone()],
        w: state.w,
        w_avg: Some(ParamVector::from(avg)),
        records,
        tracker: state.tracker,
    })
}

/// Any of the six optimizers with its configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Sox(SoxConfig),
    Soap(SoxConfig),
    Moap(SoxConfig),
    Bsgd(SoxConfig),
    SoxBoost(BoostConfig),
    PdSox(PdSoxConfig),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Sox(_) => "sox",
            Method::Soap(_) => "soap",
            Method::Moap(_) => "moap",
            Method::Bsgd(_) => "bsgd",
            Method::SoxBoost(_) => "sox_boost",
            Method::PdSox(_) => "pd_sox",
        }
    }

    pub fn batch(&self) -> BatchSpec {
        match self {
            Method::Sox(c) | Method::Soap(c) | Method::Moap(c) | Method::Bsgd(c) => c.batch,
            Method::SoxBoost(c) => c.batch,
            Method::PdSox(c) => c.batch,
        }
    }

    pub fn total_iters(&self) -> usize {
        match self {
            Method::Sox(c) | Method::Soap(c) | Method::Moap(c) | Method::Bsgd(c) => c.iters,
            Method::SoxBoost(c) => c.total_iters(),
            Method::PdSox(c) => c.iters,
        }
    }

    pub fn validate_for<P: FccoProblem + ?Sized>(&self, problem: &P) -> Result<()> {
        match self {
            Method::Sox(c) | Method::Soap(c) | Method::Moap(c) | Method::Bsgd(c) => c.validate()?,
            Method::SoxBoost(c) => c.validate()?,
            Method::PdSox(c) => {
                if problem.d_prime() != 1 {
                    return Err(Error::ScalarInnerRequired);
                }
                if !problem.is_monotone_convex() {
                    return Err(Error::NotMonotoneConvex);
                }
                c.validate()?
            }
        }
        self.batch().validate(problem)
    }

    /// Runs the method, calling `monitor` after every step.
    pub fn run<P, R>(&self, problem: &P, w0: &[f64], rng: &mut R, monitor: &mut Monitor<'_>) -> Result<RunOutput>
    where
        P: FccoProblem + ?Sized,
        R: Rng + ?Sized,
    {
        match self {
            Method::Sox(c) => run_single(problem, w0, Estimator::Sox, c, rng, monitor),
            Method::Soap(c) => run_single(problem, w0, Estimator::Soap, c, rng, monitor),
            Method::Moap(c) => run_single(problem, w0, Estimator::Moap, c, rng, monitor),
            Method::Bsgd(c) => run_single(problem, w0, Estimator::Bsgd, c, rng, monitor),
            Method::SoxBoost(c) => sox_boost_run_monitored(problem, w0, c, rng, monitor),
            Method::PdSox(c) => pd_sox_run_monitored(problem, w0, c, rng, monitor),
        }
    }
}
