#![allow(dead_code)]

use fcco_core::{FccoProblem, Result};

/// Outer function applied to a scalar inner value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outer {
    Identity,
    Square,
}

/// `g_ij(w) = a_ij + <c_ij, w> + q_ij <c_ij, w>² / 2`, scalar inner value.
#[derive(Debug, Clone)]
pub struct Toy {
    pub offset: Vec<Vec<f64>>,
    pub coef: Vec<Vec<Vec<f64>>>,
    pub curvature: Vec<Vec<f64>>,
    pub outer: Outer,
    pub dim: usize,
}

impl Toy {
    /// Deterministic instance with inner sizes cycling through 2..=4.
    pub fn new(n: usize, dim: usize, curved: bool, outer: Outer) -> Self {
        let mut state = 0x9e37_79b9_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let sizes: Vec<usize> = (0..n).map(|i| 2 + i % 3).collect();
        let offset = sizes.iter().map(|&m| (0..m).map(|_| next()).collect()).collect();
        let coef = sizes.iter().map(|&m| (0..m).map(|_| (0..dim).map(|_| next()).collect()).collect()).collect();
        let curvature = sizes
            .iter()
            .map(|&m| (0..m).map(|_| if curved { 0.5 + 0.5 * next().abs() } else { 0.0 }).collect())
            .collect();
        Toy { offset, coef, curvature, outer, dim }
    }

    fn linear(&self, w: &[f64], i: usize, j: usize) -> f64 {
        self.coef[i][j].iter().zip(w).map(|(c, x)| c * x).sum()
    }
}

impl FccoProblem for Toy {
    fn n_outer(&self) -> usize {
        self.offset.len()
    }
    fn inner_size(&self, i: usize) -> usize {
        self.offset[i].len()
    }
    fn d_prime(&self) -> usize {
        1
    }
    fn dim_w(&self) -> usize {
        self.dim
    }
    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]) {
        let s = self.linear(w, i, j);
        out[0] = self.offset[i][j] + s + 0.5 * self.curvature[i][j] * s * s;
    }
    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]) {
        let s = self.linear(w, i, j);
        let k = a[0] * (1.0 + self.curvature[i][j] * s);
        for (o, c) in out.iter_mut().zip(&self.coef[i][j]) {
            *o += k * c;
        }
    }
    fn f_value(&self, _i: usize, u: &[f64]) -> Result<f64> {
        Ok(match self.outer {
            Outer::Identity => u[0],
            Outer::Square => u[0] * u[0],
        })
    }
    fn f_grad(&self, _i: usize, u: &[f64], out: &mut [f64]) -> Result<()> {
        out[0] = match self.outer {
            Outer::Identity => 1.0,
            Outer::Square => 2.0 * u[0],
        };
        Ok(())
    }
    fn is_monotone_convex(&self) -> bool {
        self.outer == Outer::Identity
    }
}

/// Plain full-batch gradient descent, `iters` steps, every iterate returned.
pub fn gd_trajectory<P: FccoProblem>(problem: &P, w0: &[f64], eta: f64, iters: usize) -> Vec<Vec<f64>> {
    let mut w = w0.to_vec();
    let mut out = Vec::with_capacity(iters);
    for _ in 0..iters {
        let g = fcco_core::full_gradient(problem, &w).unwrap();
        for (x, d) in w.iter_mut().zip(g.iter()) {
            *x -= eta * d;
        }
        out.push(w.clone());
    }
    out
}
