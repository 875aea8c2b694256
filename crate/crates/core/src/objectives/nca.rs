use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::problem::FccoProblem;

use super::ap::check_denominator;

/// Neighborhood component analysis with a linear map `A ∈ ℝ^{r×d}`
/// (row-major in the parameter vector).
///
/// Every point is an outer index and its inner set is all other points. With
/// `e_ij = exp(-‖A(x_i - x_j)‖²)` the inner value is `(1[y_j = y_i] e_ij, e_ij)`
/// and `f(g) = -g₁ / g₂`, averaged over points.
#[derive(Debug, Clone)]
pub struct Nca {
    points: Vec<f64>,
    dim: usize,
    labels: Vec<usize>,
    rank: usize,
}

impl Nca {
    pub fn new(points: Vec<f64>, dim: usize, labels: Vec<usize>, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidConfig("NCA rank must be >= 1".into()));
        }
        if dim == 0 || points.len() != labels.len() * dim || labels.len() < 2 {
            return Err(Error::InvalidDataset(format!(
                "{} coordinates do not form at least two points of dimension {}",
                points.len(),
                dim
            )));
        }
        let classes = labels.iter().max().map_or(0, |&m| m + 1);
        let mut counts = vec![0usize; classes];
        for &l in &labels {
            counts[l] += 1;
        }
        if let Some(class) = counts.iter().position(|&c| c == 1) {
            return Err(Error::SingletonClass { class });
        }
        Ok(Nca { points, dim, labels, rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn point(&self, k: usize) -> &[f64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }

    /// Maps inner index `j` of outer index `i` to a point index, skipping `i`.
    fn neighbor(i: usize, j: usize) -> usize {
        if j < i {
            j
        } else {
            j + 1
        }
    }

    /// Returns `(δ = x_i - x_k, z = Aδ, exp(-‖z‖²))`.
    fn pair(&self, a: &[f64], i: usize, k: usize) -> (Vec<f64>, Vec<f64>, f64) {
        let delta: Vec<f64> = self.point(i).iter().zip(self.point(k)).map(|(x, y)| x - y).collect();
        let z: Vec<f64> = a.chunks(self.dim).map(|row| crate::data::dot(row, &delta)).collect();
        let sq: f64 = z.iter().map(|v| v * v).sum();
        (delta, z, math::exp(-sq))
    }
}

impl FccoProblem for Nca {
    fn n_outer(&self) -> usize {
        self.labels.len()
    }

    fn inner_size(&self, _i: usize) -> usize {
        self.labels.len() - 1
    }

    fn d_prime(&self) -> usize {
        2
    }

    fn dim_w(&self) -> usize {
        self.rank * self.dim
    }

    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]) {
        let k = Self::neighbor(i, j);
        let (_, _, e) = self.pair(w, i, k);
        out[0] = if self.labels[k] == self.labels[i] { e } else { 0.0 };
        out[1] = e;
    }

    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]) {
        let k = Self::neighbor(i, j);
        let (delta, z, e) = self.pair(w, i, k);
        let same = if self.labels[k] == self.labels[i] { a[0] } else { 0.0 };
        // d e / dA = -2 e (Aδ) δᵀ
        let c = -2.0 * e * (same + a[1]);
        for (row, zr) in out.chunks_mut(self.dim).zip(&z) {
            for (o, d) in row.iter_mut().zip(&delta) {
                *o += c * zr * d;
            }
        }
    }

    fn f_value(&self, i: usize, u: &[f64]) -> Result<f64> {
        check_denominator("NCA", i, u[1])?;
        Ok(-u[0] / u[1])
    }

    fn f_grad(&self, i: usize, u: &[f64], out: &mut [f64]) -> Result<()> {
        check_denominator("NCA", i, u[1])?;
        out[0] = -1.0 / u[1];
        out[1] = u[0] / (u[1] * u[1]);
        Ok(())
    }
}
