//! Brute-force oracles: finite differences, exhaustive mini-batch
//! enumeration, a full-batch descent reference, and tracker contraction.

use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::math;
use crate::problem::{
    batch_vjp, check_index, full_gradient, full_objective, g_batch, g_full, BatchSpec, FccoProblem, ParamVector,
};
use crate::tracker::{tracker_error, TrackerTable};

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Largest outer or inner set size [`enumerate_estimator_bias`] accepts.
pub const ENUMERATION_LIMIT: usize = 6;

/// Largest inner set size [`enumerate_inner_bias`] accepts.
pub const INNER_ENUMERATION_LIMIT: usize = 8;

/// Central differences of [`full_objective`], coordinate by coordinate.
pub fn fd_gradient<P: FccoProblem + ?Sized>(problem: &P, w: &[f64], step: f64) -> Result<ParamVector> {
    if !(step > 0.0) {
        return Err(Error::InvalidConfig(alloc::format!("finite-difference step must be > 0, got {step}")));
    }
    let mut probe = w.to_vec();
    let mut grad = vec![0.0; w.len()];
    for k in 0..w.len() {
        probe[k] = w[k] + step;
        let plus = full_objective(problem, &probe).map_err(|_| Error::ProbeOverflow { coordinate: k })?;
        probe[k] = w[k] - step;
        let minus = full_objective(problem, &probe).map_err(|_| Error::ProbeOverflow { coordinate: k })?;
        probe[k] = w[k];
        grad[k] = (plus - minus) / (2.0 * step);
    }
    Ok(ParamVector::from(grad))
}

/// `‖a - b‖ / max(1, ‖b‖)`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    math::norm2(&diff) / math::norm2(b).max(1.0)
}

/// Relative error of [`full_gradient`] against [`fd_gradient`] at `w`.
pub fn gradient_check<P: FccoProblem + ?Sized>(problem: &P, w: &[f64], step: f64) -> Result<f64> {
    let analytic = full_gradient(problem, w)?;
    let numeric = fd_gradient(problem, w, step)?;
    Ok(relative_error(&analytic, &numeric))
}

/// Largest absolute deviation between the mean of `g_batch` over every
/// size-`inner` subset of `S_i` and the exact inner value.
pub fn enumerate_inner_bias<P: FccoProblem + ?Sized>(problem: &P, w: &[f64], i: usize, inner: usize) -> Result<f64> {
    check_index(problem, i)?;
    let size = problem.inner_size(i);
    if size > INNER_ENUMERATION_LIMIT {
        return Err(Error::EnumerationBoundExceeded);
    }
    if inner == 0 || inner > size {
        return Err(Error::InvalidBatch(alloc::format!("inner batch {inner} not in [1, {size}]")));
    }
    let mut mean = vec![0.0; problem.d_prime()];
    let mut count = 0usize;
    for batch in (0..size).combinations(inner) {
        for (m, g) in mean.iter_mut().zip(g_batch(problem, w, i, &batch)?) {
            *m += g;
        }
        count += 1;
    }
    let exact = g_full(problem, w, i);
    Ok(mean.iter().zip(&exact).map(|(m, g)| (m / count as f64 - g).abs()).fold(0.0, f64::max))
}

/// Expected BSGD direction and its distance from the exact gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasReport {
    pub mean_estimate: ParamVector,
    pub bias_norm: f64,
}

/// Averages the BSGD gradient estimator over every outer batch and every
/// inner batch with equal weight.
///
/// Inner batches of different outer indices are independent, so the joint
/// average factorizes into a per-index inner average, which is what is
/// computed; outer batches are enumerated explicitly.
pub fn enumerate_estimator_bias<P: FccoProblem + ?Sized>(
    problem: &P,
    w: &[f64],
    batch: BatchSpec,
) -> Result<BiasReport> {
    let n = problem.n_outer();
    if n > ENUMERATION_LIMIT || (0..n).any(|i| problem.inner_size(i) > ENUMERATION_LIMIT) {
        return Err(Error::EnumerationBoundExceeded);
    }
    batch.validate(problem)?;
    let dim = problem.dim_w();
    let mut a = vec![0.0; problem.d_prime()];

    // Per-index expectation over inner batches of ∇g(B) ∇f(g(B)).
    let mut per_index = vec![vec![0.0; dim]; n];
    for (i, acc) in per_index.iter_mut().enumerate() {
        let inner: Vec<Vec<usize>> = (0..problem.inner_size(i)).combinations(batch.inner).collect();
        let weight = 1.0 / inner.len() as f64;
        for b in &inner {
            let ghat = g_batch(problem, w, i, b)?;
            problem.f_grad(i, &ghat, &mut a)?;
            batch_vjp(problem, w, i, b, &a, weight, acc);
        }
    }

    let outer: Vec<Vec<usize>> = (0..n).combinations(batch.outer).collect();
    let weight = 1.0 / (outer.len() * batch.outer) as f64;
    let mut mean = vec![0.0; dim];
    for b in &outer {
        for &i in b {
            for (m, x) in mean.iter_mut().zip(&per_index[i]) {
                *m += weight * x;
            }
        }
    }
    problem.regularizer_grad(w, &mut mean);

    let exact = full_gradient(problem, w)?;
    let diff: Vec<f64> = mean.iter().zip(exact.iter()).map(|(m, g)| m - g).collect();
    Ok(BiasReport { mean_estimate: ParamVector::from(mean), bias_norm: math::norm2(&diff) })
}

/// Outcome of [`reference_gd`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRun {
    /// Iterate with the lowest objective seen.
    pub w_best: ParamVector,
    pub f_best: f64,
    /// Objective at `w0` followed by one entry per accepted step.
    pub trace: Vec<f64>,
}

/// Consecutive objective increases tolerated before [`reference_gd`] gives up.
pub const DIVERGENCE_PATIENCE: usize = 50;

/// Deterministic full-batch gradient descent.
///
/// With `backtrack`, a step that raises the objective is retried with half the
/// step size (the reduced size is kept for later steps); the run stops early
/// once no halving helps. Without it, every step is accepted and
/// [`DIVERGENCE_PATIENCE`] consecutive increases are reported as divergence.
pub fn reference_gd<P: FccoProblem + ?Sized>(
    problem: &P,
    w0: &[f64],
    eta: f64,
    iters: usize,
    backtrack: bool,
) -> Result<ReferenceRun> {
    let mut w = w0.to_vec();
    let mut f = full_objective(problem, &w)?;
    let mut trace = vec![f];
    let mut best = (w.clone(), f);
    let mut eta = eta;
    let mut increases = 0;
    let mut candidate = vec![0.0; w.len()];
    'outer: for t in 1..=iters {
        let g = full_gradient(problem, &w)?;
        loop {
            for ((c, x), d) in candidate.iter_mut().zip(&w).zip(g.iter()) {
                *c = x - eta * d;
            }
            problem.project(&mut candidate);
            let f_new = match full_objective(problem, &candidate) {
                Ok(v) => v,
                Err(e) if !backtrack => return Err(e),
                Err(_) => f64::INFINITY,
            };
            if !backtrack || f_new <= f {
                if f_new > f {
                    increases += 1;
                    if increases >= DIVERGENCE_PATIENCE {
                        return Err(Error::Divergence { iteration: t });
                    }
                } else {
                    increases = 0;
                }
                core::mem::swap(&mut w, &mut candidate);
                f = f_new;
                trace.push(f);
                if f < best.1 {
                    best = (w.clone(), f);
                }
                break;
            }
            eta *= 0.5;
            if eta < 1e-300 {
                break 'outer;
            }
        }
    }
    Ok(ReferenceRun { w_best: ParamVector::from(best.0), f_best: best.1, trace })
}

/// Plain full-batch gradient descent with a constant step; returns `w^1..w^T`.
pub fn gd_trajectory<P: FccoProblem + ?Sized>(problem: &P, w0: &[f64], eta: f64, iters: usize) -> Result<Vec<ParamVector>> {
    let mut w = ParamVector::from(w0);
    let mut out = Vec::with_capacity(iters);
    for _ in 0..iters {
        let g = full_gradient(problem, &w)?;
        for (x, d) in w.iter_mut().zip(g.iter()) {
            *x -= eta * d;
        }
        problem.project(&mut w);
        out.push(w.clone());
    }
    Ok(out)
}

/// Tracking error after repeated full sweeps (`B1 = n`) with exact inner values at a frozen `w`.
///
/// `u0` (row-major `n × d'`) seeds the table. Returns `Ξ_0, Ξ_1, …, Ξ_sweeps`.
pub fn contraction_check<P: FccoProblem + ?Sized>(
    problem: &P,
    w: &[f64],
    gamma: f64,
    sweeps: usize,
    u0: &[f64],
) -> Result<Vec<f64>> {
    let mut table = TrackerTable::from_rows(u0.to_vec(), problem.d_prime(), gamma)?;
    let mut trace = vec![tracker_error(&table, problem, w)?];
    let exact: Vec<Vec<f64>> = (0..problem.n_outer()).map(|i| g_full(problem, w, i)).collect();
    for _ in 0..sweeps {
        for (i, g) in exact.iter().enumerate() {
            table.sox_update(i, g)?;
        }
        trace.push(tracker_error(&table, problem, w)?);
    }
    Ok(trace)
}

/// As [`contraction_check`], but each row is updated with a random inner
/// batch of size `inner` (sampled without replacement).
pub fn contraction_check_sampled<P: FccoProblem + ?Sized, R: Rng + ?Sized>(
    problem: &P,
    w: &[f64],
    gamma: f64,
    sweeps: usize,
    u0: &[f64],
    inner: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut table = TrackerTable::from_rows(u0.to_vec(), problem.d_prime(), gamma)?;
    let mut trace = vec![tracker_error(&table, problem, w)?];
    for _ in 0..sweeps {
        for i in 0..problem.n_outer() {
            let batch = rand::seq::index::sample(rng, problem.inner_size(i), inner).into_vec();
            let g = g_batch(problem, w, i, &batch)?;
            table.sox_update(i, &g)?;
        }
        trace.push(tracker_error(&table, problem, w)?);
    }
    Ok(trace)
}
