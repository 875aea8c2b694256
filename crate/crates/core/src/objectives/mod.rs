//! Concrete compositional objectives over linear models.

mod ap;
mod listnet;
mod nca;
mod pnorm;

pub use ap::ApSurrogate;
pub use listnet::ListNet;
pub use nca::Nca;
pub use pnorm::PnormPush;

use alloc::vec::Vec;

use crate::data::{ClusterData, Query, RankingDataset};
use crate::error::Result;
use crate::math;

/// Increasing convex surrogate `ℓ(s)` applied to score differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurrogateLoss {
    /// `max(0, s + margin)²`
    SquaredHinge { margin: f64 },
    /// `exp(s)`
    Exponential,
}

impl Default for SurrogateLoss {
    fn default() -> Self {
        SurrogateLoss::SquaredHinge { margin: 1.0 }
    }
}

impl SurrogateLoss {
    pub fn value(&self, s: f64) -> f64 {
        match *self {
            SurrogateLoss::SquaredHinge { margin } => {
                let h = (s + margin).max(0.0);
                h * h
            }
            SurrogateLoss::Exponential => math::exp(s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match *self {
            SurrogateLoss::SquaredHinge { margin } => 2.0 * (s + margin).max(0.0),
            SurrogateLoss::Exponential => math::exp(s),
        }
    }
}

/// Linear scoring function `h_w(x) = <w, x>`; its gradient in `w` is `x`.
#[derive(Debug, Clone, Copy)]
pub struct LinearScorer;

impl LinearScorer {
    #[inline]
    pub fn score(w: &[f64], x: &[f64]) -> f64 {
        crate::data::dot(w, x)
    }
}

/// Adds `c · (x - y)` to `out`.
#[inline]
pub(crate) fn axpy_diff(out: &mut [f64], c: f64, x: &[f64], y: &[f64]) {
    for ((o, a), b) in out.iter_mut().zip(x).zip(y) {
        *o += c * (a - b);
    }
}

/// Smallest admissible ratio denominator for the AP and NCA outer functions.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

pub fn make_ap_problem(data: RankingDataset, loss: SurrogateLoss) -> ApSurrogate {
    ApSurrogate::new(data, loss)
}

pub fn make_pnorm_push_problem(data: RankingDataset, p: f64, loss: SurrogateLoss) -> Result<PnormPush> {
    PnormPush::new(data, p, loss)
}

pub fn make_nca_problem(points: &ClusterData, rank: usize) -> Result<Nca> {
    Nca::new(points.points.clone(), points.dim, points.labels.clone(), rank)
}

pub fn make_listnet_problem(queries: Vec<Query>, dim: usize) -> Result<ListNet> {
    ListNet::new(queries, dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loss_derivatives_match_finite_differences() {
        let h = 1e-6;
        for loss in [SurrogateLoss::SquaredHinge { margin: 1.0 }, SurrogateLoss::SquaredHinge { margin: 0.3 }, SurrogateLoss::Exponential] {
            for k in 0..41 {
                let s = -3.0 + 0.15 * k as f64 + 0.0123;
                let fd = (loss.value(s + h) - loss.value(s - h)) / (2.0 * h);
                let d = loss.derivative(s);
                assert!((fd - d).abs() <= 1e-7 * d.abs().max(1.0), "{loss:?} at {s}: {fd} vs {d}");
                assert!(d >= 0.0);
            }
        }
    }

    #[test]
    fn squared_hinge_values() {
        let l = SurrogateLoss::default();
        assert_eq!(l.value(0.0), 1.0);
        assert_eq!(l.value(-2.0), 0.0);
        assert_eq!(l.value(1.0), 4.0);
    }
}
