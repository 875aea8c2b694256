//! In-memory datasets, seeded synthetic generators, splitting, and the AP metric.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::math;

/// One sparse row: a real label and `(1-based index, value)` entries with
/// strictly increasing indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    pub label: f64,
    pub entries: Vec<(u32, f64)>,
}

/// Sparse labelled dataset as read from LibSVM text.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseDataset {
    pub rows: Vec<SparseRow>,
    /// Largest feature index that may appear (0 for an empty dataset).
    pub dim: u32,
}

impl SparseDataset {
    pub fn new(rows: Vec<SparseRow>) -> Result<Self> {
        let mut dim = 0;
        for (r, row) in rows.iter().enumerate() {
            let mut last = 0;
            for &(idx, _) in &row.entries {
                if idx <= last {
                    return Err(Error::InvalidDataset(format!(
                        "row {r}: feature indices must be strictly increasing and >= 1"
                    )));
                }
                last = idx;
            }
            dim = dim.max(last);
        }
        Ok(SparseDataset { rows, dim })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Dense row-major feature matrix of width `dim`.
    pub fn dense_features(&self) -> Vec<f64> {
        let d = self.dim as usize;
        let mut out = vec![0.0; self.rows.len() * d];
        for (r, row) in self.rows.iter().enumerate() {
            for &(idx, v) in &row.entries {
                out[r * d + idx as usize - 1] = v;
            }
        }
        out
    }

    /// Binarizes labels (`label > threshold` is positive) into a dense ranking dataset.
    pub fn to_ranking(&self, threshold: f64) -> Result<RankingDataset> {
        let labels = self.rows.iter().map(|r| if r.label > threshold { 1 } else { -1 }).collect();
        RankingDataset::new(self.dense_features(), self.dim as usize, labels)
    }

    /// Labels rounded to class ids `0..k` in order of first appearance of
    /// each distinct value, with the dense features.
    pub fn to_classes(&self) -> (Vec<f64>, Vec<usize>) {
        let mut seen: Vec<f64> = Vec::new();
        let labels = self
            .rows
            .iter()
            .map(|r| match seen.iter().position(|&l| l == r.label) {
                Some(k) => k,
                None => {
                    seen.push(r.label);
                    seen.len() - 1
                }
            })
            .collect();
        (self.dense_features(), labels)
    }

    /// Random train/test partition; see [`split_indices`].
    pub fn split<R: Rng + ?Sized>(&self, test_fraction: f64, rng: &mut R) -> Result<(Self, Self)> {
        let (train, test) = split_indices(self.rows.len(), test_fraction, rng)?;
        let pick = |idx: &[usize]| SparseDataset {
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            dim: self.dim,
        };
        Ok((pick(&train), pick(&test)))
    }
}

/// Shuffles `0..len` and cuts off `round(test_fraction · len)` test indices.
///
/// Both halves are returned in ascending order.
pub fn split_indices<R: Rng + ?Sized>(
    len: usize,
    test_fraction: f64,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::FractionOutOfRange(test_fraction));
    }
    let mut idx: Vec<usize> = (0..len).collect();
    idx.shuffle(rng);
    let n_test = (math::round(test_fraction * len as f64) as usize).min(len);
    let mut test = idx[..n_test].to_vec();
    let mut train = idx[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    Ok((train, test))
}

/// Dense binary-labelled dataset for ranking objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingDataset {
    features: Vec<f64>,
    dim: usize,
    labels: Vec<i8>,
    positives: Vec<usize>,
    negatives: Vec<usize>,
}

impl RankingDataset {
    /// `features` is row-major `m × dim`; labels must be ±1 with both present.
    pub fn new(features: Vec<f64>, dim: usize, labels: Vec<i8>) -> Result<Self> {
        if dim == 0 || features.len() != labels.len() * dim {
            return Err(Error::InvalidDataset(format!(
                "{} feature values do not form {} rows of width {}",
                features.len(),
                labels.len(),
                dim
            )));
        }
        let mut positives = Vec::new();
        let mut negatives = Vec::new();
        for (r, &y) in labels.iter().enumerate() {
            match y {
                1 => positives.push(r),
                -1 => negatives.push(r),
                other => return Err(Error::InvalidDataset(format!("row {r}: label {other} is not ±1"))),
            }
        }
        if positives.is_empty() || negatives.is_empty() {
            return Err(Error::InvalidDataset("need at least one positive and one negative".into()));
        }
        Ok(RankingDataset { features, dim, labels, positives, negatives })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.features[r * self.dim..(r + 1) * self.dim]
    }

    pub fn label(&self, r: usize) -> i8 {
        self.labels[r]
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn positives(&self) -> &[usize] {
        &self.positives
    }

    pub fn negatives(&self) -> &[usize] {
        &self.negatives
    }

    /// Linear scores `<w, x_r>` for every row.
    pub fn scores(&self, w: &[f64]) -> Vec<f64> {
        (0..self.len()).map(|r| dot(w, self.row(r))).collect()
    }

    /// Subset of rows (in the given order).
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        let mut features = Vec::with_capacity(rows.len() * self.dim);
        for &r in rows {
            features.extend_from_slice(self.row(r));
        }
        RankingDataset::new(features, self.dim, rows.iter().map(|&r| self.labels[r]).collect())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Two Gaussian classes with means `±(separation/2)·e`, `e = (1,…,1)/√dim`,
/// and per-coordinate standard deviation `noise`. Positives come first.
pub fn gen_ranking<R: Rng + ?Sized>(
    n_pos: usize,
    n_neg: usize,
    dim: usize,
    separation: f64,
    noise: f64,
    rng: &mut R,
) -> Result<RankingDataset> {
    if n_pos == 0 || n_neg == 0 || dim == 0 {
        return Err(Error::InvalidDataset("class counts and dim must be >= 1".into()));
    }
    let offset = 0.5 * separation / math::sqrt(dim as f64);
    let mut features = Vec::with_capacity((n_pos + n_neg) * dim);
    let mut labels = Vec::with_capacity(n_pos + n_neg);
    for (count, sign) in [(n_pos, 1i8), (n_neg, -1i8)] {
        for _ in 0..count {
            for _ in 0..dim {
                features.push(f64::from(sign) * offset + noise * gaussian(rng));
            }
            labels.push(sign);
        }
    }
    RankingDataset::new(features, dim, labels)
}

/// Labelled points drawn as one Gaussian blob per class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterData {
    /// Row-major `m × dim`.
    pub points: Vec<f64>,
    pub dim: usize,
    pub labels: Vec<usize>,
}

/// `n_per_class` points per class around centers drawn from `N(0, 9·I)`,
/// with per-coordinate standard deviation `spread`. Rows are grouped by class.
pub fn gen_clusters<R: Rng + ?Sized>(
    n_per_class: usize,
    n_classes: usize,
    dim: usize,
    spread: f64,
    rng: &mut R,
) -> Result<ClusterData> {
    if n_per_class < 2 || n_classes == 0 || dim == 0 {
        return Err(Error::InvalidDataset("need n_per_class >= 2, n_classes >= 1, dim >= 1".into()));
    }
    let centers: Vec<f64> = (0..n_classes * dim).map(|_| 3.0 * gaussian(rng)).collect();
    let mut points = Vec::with_capacity(n_per_class * n_classes * dim);
    let mut labels = Vec::with_capacity(n_per_class * n_classes);
    for c in 0..n_classes {
        for _ in 0..n_per_class {
            for k in 0..dim {
                points.push(centers[c * dim + k] + spread * gaussian(rng));
            }
            labels.push(c);
        }
    }
    Ok(ClusterData { points, dim, labels })
}

/// A query's candidate items with nonnegative relevance scores.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    /// Row-major `items × dim`.
    pub features: Vec<f64>,
    pub relevance: Vec<f64>,
}

impl Query {
    pub fn len(&self) -> usize {
        self.relevance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relevance.is_empty()
    }
}

/// Synthetic listwise data: Gaussian item features, relevance in `{0,1,2}`
/// from a noisy hidden linear score. Every query gets at least one relevant item.
pub fn gen_queries<R: Rng + ?Sized>(
    n_queries: usize,
    items_per_query: usize,
    dim: usize,
    rng: &mut R,
) -> Result<Vec<Query>> {
    if n_queries == 0 || items_per_query < 2 || dim == 0 {
        return Err(Error::InvalidDataset("need n_queries >= 1, items_per_query >= 2, dim >= 1".into()));
    }
    let hidden: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
    let queries = (0..n_queries)
        .map(|_| {
            let features: Vec<f64> = (0..items_per_query * dim).map(|_| gaussian(rng)).collect();
            let mut relevance: Vec<f64> = features
                .chunks(dim)
                .map(|x| {
                    let s = dot(&hidden, x) + 0.5 * gaussian(rng);
                    if s > 1.0 {
                        2.0
                    } else if s > 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            if relevance.iter().all(|&y| y == 0.0) {
                relevance[0] = 1.0;
            }
            Query { features, relevance }
        })
        .collect();
    Ok(queries)
}

/// Average precision of `scores` against ±1 `labels`.
///
/// Items are ranked by descending score; ties keep their original order.
pub fn ap_metric(scores: &[f64], labels: &[i8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch { expected: labels.len(), found: scores.len() });
    }
    let n_pos = labels.iter().filter(|&&y| y > 0).count();
    if n_pos == 0 {
        return Err(Error::NoPositives);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut hits = 0usize;
    let mut total = 0.0;
    for (rank, &r) in order.iter().enumerate() {
        if labels[r] > 0 {
            hits += 1;
            total += hits as f64 / (rank + 1) as f64;
        }
    }
    Ok(total / n_pos as f64)
}
