use crate::data::RankingDataset;
use crate::error::{Error, Result};
use crate::problem::FccoProblem;

use super::{axpy_diff, LinearScorer, SurrogateLoss, DENOMINATOR_FLOOR};

/// Smooth average-precision surrogate.
///
/// Outer indices are the positives; every example is an inner item. The
/// inner value for positive `i` and example `j` is
/// `(1[y_j = +1] · ℓ(h(x_j) - h(x_i)), ℓ(h(x_j) - h(x_i)))` and
/// `f(g) = -g₁ / g₂`.
#[derive(Debug, Clone)]
pub struct ApSurrogate {
    data: RankingDataset,
    loss: SurrogateLoss,
}

impl ApSurrogate {
    pub fn new(data: RankingDataset, loss: SurrogateLoss) -> Self {
        ApSurrogate { data, loss }
    }

    pub fn data(&self) -> &RankingDataset {
        &self.data
    }

    pub fn loss(&self) -> SurrogateLoss {
        self.loss
    }

    fn diff(&self, w: &[f64], i: usize, j: usize) -> (usize, f64) {
        let anchor = self.data.positives()[i];
        let s = LinearScorer::score(w, self.data.row(j)) - LinearScorer::score(w, self.data.row(anchor));
        (anchor, s)
    }
}

impl FccoProblem for ApSurrogate {
    fn n_outer(&self) -> usize {
        self.data.positives().len()
    }

    fn inner_size(&self, _i: usize) -> usize {
        self.data.len()
    }

    fn d_prime(&self) -> usize {
        2
    }

    fn dim_w(&self) -> usize {
        self.data.dim()
    }

    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]) {
        let (_, s) = self.diff(w, i, j);
        let l = self.loss.value(s);
        out[0] = if self.data.label(j) > 0 { l } else { 0.0 };
        out[1] = l;
    }

    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]) {
        let (anchor, s) = self.diff(w, i, j);
        let first = if self.data.label(j) > 0 { a[0] } else { 0.0 };
        let c = (first + a[1]) * self.loss.derivative(s);
        axpy_diff(out, c, self.data.row(j), self.data.row(anchor));
    }

    fn f_value(&self, i: usize, u: &[f64]) -> Result<f64> {
        check_denominator("AP", i, u[1])?;
        Ok(-u[0] / u[1])
    }

    fn f_grad(&self, i: usize, u: &[f64], out: &mut [f64]) -> Result<()> {
        check_denominator("AP", i, u[1])?;
        out[0] = -1.0 / u[1];
        out[1] = u[0] / (u[1] * u[1]);
        Ok(())
    }
}

pub(super) fn check_denominator(objective: &'static str, index: usize, value: f64) -> Result<()> {
    if value <= DENOMINATOR_FLOOR || !value.is_finite() {
        return Err(Error::DenominatorUnderflow { objective, index, value });
    }
    Ok(())
}
