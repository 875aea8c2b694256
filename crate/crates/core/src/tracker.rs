//! Moving-average state: the per-index inner-value table `u` and the
//! gradient-momentum vector `v`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::problem::{g_full, FccoProblem, ParamVector};

/// Per-outer-index estimates of the inner values, one row of `d'` entries per index.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackerTable {
    u: Vec<f64>,
    initialized: Vec<bool>,
    d_prime: usize,
    gamma: f64,
}

/// Pre- and post-update contents of one tracker row.
#[derive(Debug, Clone, PartialEq)]
pub struct RowUpdate {
    pub prev: Vec<f64>,
    pub new: Vec<f64>,
}

impl TrackerTable {
    /// Empty table; every row is initialized on first touch.
    pub fn new(n: usize, d_prime: usize, gamma: f64) -> Self {
        TrackerTable { u: vec![0.0; n * d_prime], initialized: vec![false; n], d_prime, gamma }
    }

    /// Table with all rows initialized to the given values (row-major, `n × d'`).
    pub fn from_rows(rows: Vec<f64>, d_prime: usize, gamma: f64) -> Result<Self> {
        if d_prime == 0 || !rows.len().is_multiple_of(d_prime) {
            return Err(Error::LengthMismatch { expected: d_prime, found: rows.len() });
        }
        if let Some(k) = rows.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { what: "tracker row", index: k / d_prime });
        }
        let n = rows.len() / d_prime;
        Ok(TrackerTable { u: rows, initialized: vec![true; n], d_prime, gamma })
    }

    pub fn n(&self) -> usize {
        self.initialized.len()
    }

    pub fn d_prime(&self) -> usize {
        self.d_prime
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn set_gamma(&mut self, gamma: f64) {
        self.gamma = gamma;
    }

    pub fn is_initialized(&self, i: usize) -> bool {
        self.initialized[i]
    }

    /// Row `i`, or an error if it has never been written.
    pub fn row(&self, i: usize) -> Result<&[f64]> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, size: self.n() });
        }
        if !self.initialized[i] {
            return Err(Error::UninitializedRow { index: i });
        }
        Ok(&self.u[i * self.d_prime..(i + 1) * self.d_prime])
    }

    /// Raw row-major storage, including rows that were never initialized.
    pub fn as_slice(&self) -> &[f64] {
        &self.u
    }

    fn check_ghat(&self, i: usize, ghat: &[f64]) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, size: self.n() });
        }
        if ghat.len() != self.d_prime {
            return Err(Error::LengthMismatch { expected: self.d_prime, found: ghat.len() });
        }
        if !math::all_finite(ghat) {
            return Err(Error::NonFinite { what: "inner estimate", index: i });
        }
        Ok(())
    }

    /// Selective update `u_i ← (1-γ) u_i + γ ĝ` of a single row.
    ///
    /// The first touch of a row stores `ĝ` directly, so then `prev == new == ĝ`.
    pub fn sox_update(&mut self, i: usize, ghat: &[f64]) -> Result<RowUpdate> {
        self.check_ghat(i, ghat)?;
        let range = i * self.d_prime..(i + 1) * self.d_prime;
        let row = &mut self.u[range];
        if !self.initialized[i] {
            row.copy_from_slice(ghat);
            self.initialized[i] = true;
            return Ok(RowUpdate { prev: ghat.to_vec(), new: ghat.to_vec() });
        }
        let prev = row.to_vec();
        let gamma = self.gamma;
        for (u, g) in row.iter_mut().zip(ghat) {
            *u = (1.0 - gamma) * *u + gamma * g;
        }
        if !math::all_finite(row) {
            return Err(Error::NonFinite { what: "tracker row", index: i });
        }
        Ok(RowUpdate { prev, new: row.to_vec() })
    }

    /// Scaled-decay update over the whole table.
    ///
    /// Sampled rows get `(1-γ) u_i + γ (n/B1) ĝ_i`, every other row decays to
    /// `(1-γ) u_i`. `ghat` holds one row per entry of `sampled`, in order.
    /// Rows that were never initialized are treated as zero.
    pub fn moap_update(&mut self, sampled: &[usize], ghat: &[f64], n: usize) -> Result<()> {
        let b1 = sampled.len();
        if b1 == 0 {
            return Err(Error::EmptyOuterBatch);
        }
        if ghat.len() != b1 * self.d_prime {
            return Err(Error::LengthMismatch { expected: b1 * self.d_prime, found: ghat.len() });
        }
        for (k, &i) in sampled.iter().enumerate() {
            self.check_ghat(i, &ghat[k * self.d_prime..(k + 1) * self.d_prime])?;
        }
        let decay = 1.0 - self.gamma;
        for u in self.u.iter_mut() {
            *u *= decay;
        }
        self.initialized.iter_mut().for_each(|f| *f = true);
        let scale = self.gamma * (n as f64 / b1 as f64);
        for (k, &i) in sampled.iter().enumerate() {
            let row = &mut self.u[i * self.d_prime..(i + 1) * self.d_prime];
            let g = &ghat[k * self.d_prime..(k + 1) * self.d_prime];
            for (u, g) in row.iter_mut().zip(g) {
                *u += scale * g;
            }
            if !math::all_finite(row) {
                return Err(Error::MoapScaleOverflow { index: i });
            }
        }
        Ok(())
    }
}

/// Exponential moving average of stochastic gradient estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumVector {
    v: Vec<f64>,
    beta: f64,
}

impl MomentumVector {
    pub fn new(dim: usize, beta: f64) -> Self {
        MomentumVector { v: vec![0.0; dim], beta }
    }

    pub fn from_vec(v: Vec<f64>, beta: f64) -> Self {
        MomentumVector { v, beta }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn set_beta(&mut self, beta: f64) {
        self.beta = beta;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v
    }

    /// `v ← (1-β) v + β · grad_est`; returns the new `v`.
    pub fn update(&mut self, grad_est: &[f64]) -> Result<&[f64]> {
        if grad_est.len() != self.v.len() {
            return Err(Error::LengthMismatch { expected: self.v.len(), found: grad_est.len() });
        }
        let beta = self.beta;
        for (v, g) in self.v.iter_mut().zip(grad_est) {
            *v = (1.0 - beta) * *v + beta * g;
        }
        if let Some(k) = self.v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { what: "momentum", index: k });
        }
        Ok(&self.v)
    }
}

/// Functional form of [`MomentumVector::update`].
pub fn momentum_update(m: &mut MomentumVector, grad_est: &[f64]) -> Result<ParamVector> {
    m.update(grad_est).map(ParamVector::from)
}

/// Tracking error `(1/n) Σ_i ‖u_i - g(w; z_i, S_i)‖²`.
pub fn tracker_error<P: FccoProblem + ?Sized>(
    table: &TrackerTable,
    problem: &P,
    w: &[f64],
) -> Result<f64> {
    let n = problem.n_outer();
    if table.n() != n {
        return Err(Error::LengthMismatch { expected: n, found: table.n() });
    }
    let mut total = 0.0;
    for i in 0..n {
        let row = table.row(i)?;
        let g = g_full(problem, w, i);
        total += row.iter().zip(&g).map(|(u, g)| (u - g) * (u - g)).sum::<f64>();
    }
    Ok(total / n as f64)
}
