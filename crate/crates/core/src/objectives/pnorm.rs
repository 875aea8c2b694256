use core::sync::atomic::{AtomicU64, Ordering};

use crate::data::RankingDataset;
use crate::error::{Error, Result};
use crate::math;
use crate::problem::FccoProblem;

use super::{axpy_diff, LinearScorer, SurrogateLoss};

/// Score differences are clamped to this magnitude before an exponential loss.
pub const EXP_CLAMP: f64 = 30.0;

/// p-norm push for bipartite ranking.
///
/// Outer indices are the negatives, inner items the positives:
/// `g_i = mean_j ℓ(h(z_j) - h(z_i))` over positives `j` for negative `i`,
/// and `f(g) = g^p`.
#[derive(Debug)]
pub struct PnormPush {
    data: RankingDataset,
    p: f64,
    loss: SurrogateLoss,
    clamps: AtomicU64,
}

impl Clone for PnormPush {
    fn clone(&self) -> Self {
        PnormPush {
            data: self.data.clone(),
            p: self.p,
            loss: self.loss,
            clamps: AtomicU64::new(self.clamp_count()),
        }
    }
}

impl PnormPush {
    pub fn new(data: RankingDataset, p: f64, loss: SurrogateLoss) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(PnormPush { data, p, loss, clamps: AtomicU64::new(0) })
    }

    pub fn data(&self) -> &RankingDataset {
        &self.data
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Number of score differences clamped so far.
    pub fn clamp_count(&self) -> u64 {
        self.clamps.load(Ordering::Relaxed)
    }

    /// Score difference for (negative `i`, positive `j`) and whether it was clamped.
    fn diff(&self, w: &[f64], i: usize, j: usize) -> (usize, usize, f64, bool) {
        let neg = self.data.negatives()[i];
        let pos = self.data.positives()[j];
        let s = LinearScorer::score(w, self.data.row(pos)) - LinearScorer::score(w, self.data.row(neg));
        if self.loss == SurrogateLoss::Exponential && s.abs() > EXP_CLAMP {
            (neg, pos, s.clamp(-EXP_CLAMP, EXP_CLAMP), true)
        } else {
            (neg, pos, s, false)
        }
    }
}

impl FccoProblem for PnormPush {
    fn n_outer(&self) -> usize {
        self.data.negatives().len()
    }

    fn inner_size(&self, _i: usize) -> usize {
        self.data.positives().len()
    }

    fn d_prime(&self) -> usize {
        1
    }

    fn dim_w(&self) -> usize {
        self.data.dim()
    }

    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]) {
        let (_, _, s, clamped) = self.diff(w, i, j);
        if clamped {
            self.clamps.fetch_add(1, Ordering::Relaxed);
        }
        out[0] = self.loss.value(s);
    }

    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]) {
        let (neg, pos, s, clamped) = self.diff(w, i, j);
        if clamped {
            return;
        }
        axpy_diff(out, a[0] * self.loss.derivative(s), self.data.row(pos), self.data.row(neg));
    }

    fn f_value(&self, i: usize, u: &[f64]) -> Result<f64> {
        if u[0] < 0.0 {
            return Err(Error::InvalidInner { index: i, value: u[0] });
        }
        Ok(math::powf(u[0], self.p))
    }

    fn f_grad(&self, i: usize, u: &[f64], out: &mut [f64]) -> Result<()> {
        if u[0] < 0.0 {
            return Err(Error::InvalidInner { index: i, value: u[0] });
        }
        out[0] = self.p * math::powf(u[0], self.p - 1.0);
        Ok(())
    }

    fn is_monotone_convex(&self) -> bool {
        true
    }
}
