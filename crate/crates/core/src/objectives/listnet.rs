use alloc::vec::Vec;

use crate::data::Query;
use crate::error::{Error, Result};
use crate::math;
use crate::problem::FccoProblem;

use super::{axpy_diff, LinearScorer};

/// ListNet cross-entropy as a compositional objective.
///
/// Outer indices are the `(query, item)` pairs with positive top-one
/// probability `P ∝ relevance` (normalized within the query); the inner set is
/// the query's items. The inner value is `mean_x exp(h(x) - h(x_i))` and
/// `f_i(g) = P_i · ln g`, averaged over outer indices.
///
/// The raw listwise loss `-Σ_q Σ_i P_i ln softmax_i` equals
/// `n · F(w) + Σ_q ln |S_q|`; see [`ListNet::to_cross_entropy`].
#[derive(Debug, Clone)]
pub struct ListNet {
    queries: Vec<Query>,
    dim: usize,
    /// `(query, item, P)` for every outer index.
    index: Vec<(usize, usize, f64)>,
}

impl ListNet {
    pub fn new(queries: Vec<Query>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDataset("feature dimension must be >= 1".into()));
        }
        let mut index = Vec::new();
        for (q, query) in queries.iter().enumerate() {
            if query.len() < 2 {
                return Err(Error::QueryTooSmall { query: q });
            }
            if query.features.len() != query.len() * dim {
                return Err(Error::LengthMismatch { expected: query.len() * dim, found: query.features.len() });
            }
            if query.relevance.iter().any(|&y| !(y >= 0.0 && y.is_finite())) {
                return Err(Error::InvalidDataset(alloc::format!("query {q}: relevance must be finite and >= 0")));
            }
            let total: f64 = query.relevance.iter().sum();
            if total <= 0.0 {
                return Err(Error::ZeroRelevance { query: q });
            }
            for (i, &y) in query.relevance.iter().enumerate() {
                if y > 0.0 {
                    index.push((q, i, y / total));
                }
            }
        }
        if index.is_empty() {
            return Err(Error::InvalidDataset("no queries".into()));
        }
        Ok(ListNet { queries, dim, index })
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    /// `(query, item, P)` of outer index `i`.
    pub fn outer_index(&self, i: usize) -> (usize, usize, f64) {
        self.index[i]
    }

    fn item(&self, q: usize, i: usize) -> &[f64] {
        &self.queries[q].features[i * self.dim..(i + 1) * self.dim]
    }

    /// Inner value `mean_x exp(h(x) - h(x_i))` for any item of query `q`,
    /// including items that are not outer indices.
    pub fn item_inner_value(&self, w: &[f64], q: usize, i: usize) -> f64 {
        let anchor = LinearScorer::score(w, self.item(q, i));
        let n = self.queries[q].len();
        (0..n).map(|j| math::exp(LinearScorer::score(w, self.item(q, j)) - anchor)).sum::<f64>() / n as f64
    }

    /// Converts an objective value to the raw listwise cross-entropy.
    pub fn to_cross_entropy(&self, objective: f64) -> f64 {
        let offset: f64 = self.queries.iter().map(|q| math::ln(q.len() as f64)).sum();
        self.index.len() as f64 * objective + offset
    }
}

impl FccoProblem for ListNet {
    fn n_outer(&self) -> usize {
        self.index.len()
    }

    fn inner_size(&self, i: usize) -> usize {
        self.queries[self.index[i].0].len()
    }

    fn d_prime(&self) -> usize {
        1
    }

    fn dim_w(&self) -> usize {
        self.dim
    }

    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]) {
        let (q, item, _) = self.index[i];
        let s = LinearScorer::score(w, self.item(q, j)) - LinearScorer::score(w, self.item(q, item));
        out[0] = math::exp(s);
    }

    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]) {
        let (q, item, _) = self.index[i];
        let (xj, xi) = (self.item(q, j), self.item(q, item));
        let e = math::exp(LinearScorer::score(w, xj) - LinearScorer::score(w, xi));
        axpy_diff(out, a[0] * e, xj, xi);
    }

    fn f_value(&self, i: usize, u: &[f64]) -> Result<f64> {
        if !(u[0] > 0.0) {
            return Err(Error::InvalidInner { index: i, value: u[0] });
        }
        Ok(self.index[i].2 * math::ln(u[0]))
    }

    fn f_grad(&self, i: usize, u: &[f64], out: &mut [f64]) -> Result<()> {
        if !(u[0] > 0.0) {
            return Err(Error::InvalidInner { index: i, value: u[0] });
        }
        out[0] = self.index[i].2 / u[0];
        Ok(())
    }
}
