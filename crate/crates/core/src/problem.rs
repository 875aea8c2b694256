//! The compositional problem abstraction and its exact (full-batch) evaluators.
//!
//! Every inner value is a *mean* over the inner set or batch. Jacobians are
//! never materialized: problems expose per-item vector-Jacobian products.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::math;

/// Model parameter, stored flat (matrix parameters are row-major).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn zeros(dim: usize) -> Self {
        ParamVector(vec![0.0; dim])
    }

    pub fn is_finite(&self) -> bool {
        math::all_finite(&self.0)
    }

    pub fn norm(&self) -> f64 {
        math::norm2(&self.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for ParamVector {
    fn from(v: Vec<f64>) -> Self {
        ParamVector(v)
    }
}

impl From<&[f64]> for ParamVector {
    fn from(v: &[f64]) -> Self {
        ParamVector(v.to_vec())
    }
}

impl Deref for ParamVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for ParamVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

/// A finite-sum coupled compositional objective `(1/n) Σ_i f_i(g(w; z_i, S_i))`.
///
/// Implementations must be immutable after construction; runs share them
/// across threads.
pub trait FccoProblem: Sync {
    /// Number of outer indices `n = |D|`.
    fn n_outer(&self) -> usize;

    /// Number of inner items `|S_i|` for outer index `i`.
    fn inner_size(&self, i: usize) -> usize;

    /// Dimension `d'` of the inner value.
    fn d_prime(&self) -> usize;

    /// Dimension of the parameter vector.
    fn dim_w(&self) -> usize;

    /// Writes the per-item inner value `g(w; z_i, ξ_ij)` into `out` (length `d'`).
    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]);

    /// Adds `∇g(w; z_i, ξ_ij) · a` to `out`, where `a` has length `d'` and
    /// `out` has length `dim_w`.
    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]);

    fn f_value(&self, i: usize, u: &[f64]) -> Result<f64>;

    /// Writes `∇f_i(u)` into `out` (length `d'`).
    fn f_grad(&self, i: usize, u: &[f64], out: &mut [f64]) -> Result<()>;

    /// Projection onto the feasible domain. Identity unless overridden.
    fn project(&self, _w: &mut [f64]) {}

    /// Deterministic additive term of the objective (e.g. a ridge penalty).
    fn regularizer(&self, _w: &[f64]) -> f64 {
        0.0
    }

    /// Adds the gradient of [`FccoProblem::regularizer`] to `out`.
    fn regularizer_grad(&self, _w: &[f64], _out: &mut [f64]) {}

    /// True when `d' = 1`, each `f_i` is monotone non-decreasing and convex,
    /// and `g` is convex in `w`.
    fn is_monotone_convex(&self) -> bool {
        false
    }
}

impl<P: FccoProblem + ?Sized> FccoProblem for &P {
    fn n_outer(&self) -> usize {
        (**self).n_outer()
    }
    fn inner_size(&self, i: usize) -> usize {
        (**self).inner_size(i)
    }
    fn d_prime(&self) -> usize {
        (**self).d_prime()
    }
    fn dim_w(&self) -> usize {
        (**self).dim_w()
    }
    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]) {
        (**self).g_sample(w, i, j, out)
    }
    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]) {
        (**self).g_vjp_sample(w, i, j, a, out)
    }
    fn f_value(&self, i: usize, u: &[f64]) -> Result<f64> {
        (**self).f_value(i, u)
    }
    fn f_grad(&self, i: usize, u: &[f64], out: &mut [f64]) -> Result<()> {
        (**self).f_grad(i, u, out)
    }
    fn project(&self, w: &mut [f64]) {
        (**self).project(w)
    }
    fn regularizer(&self, w: &[f64]) -> f64 {
        (**self).regularizer(w)
    }
    fn regularizer_grad(&self, w: &[f64], out: &mut [f64]) {
        (**self).regularizer_grad(w, out)
    }
    fn is_monotone_convex(&self) -> bool {
        (**self).is_monotone_convex()
    }
}

impl<P: FccoProblem + Send + ?Sized> FccoProblem for alloc::sync::Arc<P> {
    fn n_outer(&self) -> usize {
        (**self).n_outer()
    }
    fn inner_size(&self, i: usize) -> usize {
        (**self).inner_size(i)
    }
    fn d_prime(&self) -> usize {
        (**self).d_prime()
    }
    fn dim_w(&self) -> usize {
        (**self).dim_w()
    }
    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]) {
        (**self).g_sample(w, i, j, out)
    }
    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]) {
        (**self).g_vjp_sample(w, i, j, a, out)
    }
    fn f_value(&self, i: usize, u: &[f64]) -> Result<f64> {
        (**self).f_value(i, u)
    }
    fn f_grad(&self, i: usize, u: &[f64], out: &mut [f64]) -> Result<()> {
        (**self).f_grad(i, u, out)
    }
    fn project(&self, w: &mut [f64]) {
        (**self).project(w)
    }
    fn regularizer(&self, w: &[f64]) -> f64 {
        (**self).regularizer(w)
    }
    fn regularizer_grad(&self, w: &[f64], out: &mut [f64]) {
        (**self).regularizer_grad(w, out)
    }
    fn is_monotone_convex(&self) -> bool {
        (**self).is_monotone_convex()
    }
}

/// Outer (`B1`) and inner (`B2`) mini-batch sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchSpec {
    pub outer: usize,
    pub inner: usize,
}

impl BatchSpec {
    pub fn new(outer: usize, inner: usize) -> Self {
        BatchSpec { outer, inner }
    }

    /// Full outer and inner batches for `problem`.
    ///
    /// Inner size is the smallest `|S_i|`, so it is only "full" for problems
    /// with equal inner set sizes.
    pub fn full<P: FccoProblem + ?Sized>(problem: &P) -> Self {
        BatchSpec { outer: problem.n_outer(), inner: min_inner_size(problem) }
    }

    pub fn validate<P: FccoProblem + ?Sized>(&self, problem: &P) -> Result<()> {
        let n = problem.n_outer();
        if self.outer == 0 || self.outer > n {
            return Err(Error::InvalidBatch(format!(
                "outer batch {} must lie in [1, {}]",
                self.outer, n
            )));
        }
        let min_inner = min_inner_size(problem);
        if self.inner == 0 || self.inner > min_inner {
            return Err(Error::InvalidBatch(format!(
                "inner batch {} must lie in [1, {}]",
                self.inner, min_inner
            )));
        }
        Ok(())
    }
}

pub(crate) fn min_inner_size<P: FccoProblem + ?Sized>(problem: &P) -> usize {
    (0..problem.n_outer()).map(|i| problem.inner_size(i)).min().unwrap_or(0)
}

/// Mean of `g_sample` over the inner items produced by `items`.
fn inner_mean<P, I>(problem: &P, w: &[f64], i: usize, items: I, out: &mut [f64])
where
    P: FccoProblem + ?Sized,
    I: ExactSizeIterator<Item = usize>,
{
    let len = items.len() as f64;
    let mut scratch = vec![0.0; out.len()];
    out.iter_mut().for_each(|x| *x = 0.0);
    for j in items {
        problem.g_sample(w, i, j, &mut scratch);
        for (acc, g) in out.iter_mut().zip(&scratch) {
            *acc += g;
        }
    }
    out.iter_mut().for_each(|x| *x /= len);
}

/// Adds `scale · (1/|items|) Σ_j ∇g(w; z_i, ξ_ij) · a` to `out`.
fn inner_vjp<P, I>(problem: &P, w: &[f64], i: usize, items: I, a: &[f64], scale: f64, out: &mut [f64])
where
    P: FccoProblem + ?Sized,
    I: ExactSizeIterator<Item = usize>,
{
    let coef = scale / items.len() as f64;
    let mut acc = vec![0.0; out.len()];
    for j in items {
        problem.g_vjp_sample(w, i, j, a, &mut acc);
    }
    for (o, x) in out.iter_mut().zip(&acc) {
        *o += coef * x;
    }
}

pub(crate) fn check_index<P: FccoProblem + ?Sized>(problem: &P, i: usize) -> Result<()> {
    if i >= problem.n_outer() {
        return Err(Error::IndexOutOfRange { index: i, size: problem.n_outer() });
    }
    Ok(())
}

/// Exact inner value `g(w; z_i, S_i)`: the mean over the whole inner set.
pub fn g_full<P: FccoProblem + ?Sized>(problem: &P, w: &[f64], i: usize) -> Vec<f64> {
    let mut out = vec![0.0; problem.d_prime()];
    inner_mean(problem, w, i, 0..problem.inner_size(i), &mut out);
    out
}

/// Mini-batch inner value: the mean of `g_sample` over `inner_batch`.
pub fn g_batch<P: FccoProblem + ?Sized>(
    problem: &P,
    w: &[f64],
    i: usize,
    inner_batch: &[usize],
) -> Result<Vec<f64>> {
    if inner_batch.is_empty() {
        return Err(Error::EmptyInnerBatch);
    }
    let size = problem.inner_size(i);
    if let Some(&j) = inner_batch.iter().find(|&&j| j >= size) {
        return Err(Error::IndexOutOfRange { index: j, size });
    }
    let mut out = vec![0.0; problem.d_prime()];
    inner_mean(problem, w, i, inner_batch.iter().copied(), &mut out);
    Ok(out)
}

/// Adds `scale · ∇g(w; z_i, B) · a` to `out` for the inner batch `B`.
///
/// Shared by every optimizer and by [`full_gradient`] so that full-batch runs
/// reproduce exact gradient descent bit for bit.
pub fn batch_vjp<P: FccoProblem + ?Sized>(
    problem: &P,
    w: &[f64],
    i: usize,
    inner_batch: &[usize],
    a: &[f64],
    scale: f64,
    out: &mut [f64],
) {
    inner_vjp(problem, w, i, inner_batch.iter().copied(), a, scale, out);
}

/// Exact objective `F(w)`, including any regularizer.
pub fn full_objective<P: FccoProblem + ?Sized>(problem: &P, w: &[f64]) -> Result<f64> {
    let n = problem.n_outer();
    let mut total = 0.0;
    for i in 0..n {
        let u = g_full(problem, w, i);
        let fi = problem.f_value(i, &u)?;
        if !fi.is_finite() {
            return Err(Error::ObjectiveOverflow { index: i });
        }
        total += fi;
    }
    let value = total / n as f64 + problem.regularizer(w);
    if !value.is_finite() {
        return Err(Error::ObjectiveOverflow { index: n });
    }
    Ok(value)
}

/// Exact chain-rule gradient `(1/n) Σ_i ∇g(w; z_i, S_i) ∇f_i(g(w; z_i, S_i))`.
pub fn full_gradient<P: FccoProblem + ?Sized>(problem: &P, w: &[f64]) -> Result<ParamVector> {
    let n = problem.n_outer();
    let mut grad = vec![0.0; problem.dim_w()];
    let mut a = vec![0.0; problem.d_prime()];
    let scale = 1.0 / n as f64;
    for i in 0..n {
        let u = g_full(problem, w, i);
        problem.f_grad(i, &u, &mut a)?;
        if !math::all_finite(&a) {
            return Err(Error::ObjectiveOverflow { index: i });
        }
        inner_vjp(problem, w, i, 0..problem.inner_size(i), &a, scale, &mut grad);
    }
    problem.regularizer_grad(w, &mut grad);
    Ok(ParamVector::from(grad))
}

/// Adds the ridge penalty `(μ/2)‖w‖²` to a problem.
#[derive(Debug, Clone)]
pub struct Ridge<P> {
    pub inner: P,
    pub mu: f64,
}

impl<P: FccoProblem> Ridge<P> {
    pub fn new(inner: P, mu: f64) -> Self {
        Ridge { inner, mu }
    }
}

impl<P: FccoProblem> FccoProblem for Ridge<P> {
    fn n_outer(&self) -> usize {
        self.inner.n_outer()
    }
    fn inner_size(&self, i: usize) -> usize {
        self.inner.inner_size(i)
    }
    fn d_prime(&self) -> usize {
        self.inner.d_prime()
    }
    fn dim_w(&self) -> usize {
        self.inner.dim_w()
    }
    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]) {
        self.inner.g_sample(w, i, j, out)
    }
    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]) {
        self.inner.g_vjp_sample(w, i, j, a, out)
    }
    fn f_value(&self, i: usize, u: &[f64]) -> Result<f64> {
        self.inner.f_value(i, u)
    }
    fn f_grad(&self, i: usize, u: &[f64], out: &mut [f64]) -> Result<()> {
        self.inner.f_grad(i, u, out)
    }
    fn project(&self, w: &mut [f64]) {
        self.inner.project(w)
    }
    fn regularizer(&self, w: &[f64]) -> f64 {
        let sq: f64 = w.iter().map(|x| x * x).sum();
        self.inner.regularizer(w) + 0.5 * self.mu * sq
    }
    fn regularizer_grad(&self, w: &[f64], out: &mut [f64]) {
        self.inner.regularizer_grad(w, out);
        for (o, x) in out.iter_mut().zip(w) {
            *o += self.mu * x;
        }
    }
    fn is_monotone_convex(&self) -> bool {
        self.inner.is_monotone_convex()
    }
}

/// Euclidean projection onto the ball `{‖w‖ ≤ radius}`.
pub fn project_ball(w: &mut [f64], radius: f64) {
    let norm = math::norm2(w);
    if norm > radius {
        let s = radius / norm;
        w.iter_mut().for_each(|x| *x *= s);
    }
}

/// Restricts a problem to the ball `‖w‖ ≤ radius` (applied after the inner
/// problem's own projection).
#[derive(Debug, Clone)]
pub struct Ball<P> {
    pub inner: P,
    pub radius: f64,
}

impl<P: FccoProblem> Ball<P> {
    pub fn new(inner: P, radius: f64) -> Self {
        Ball { inner, radius }
    }
}

impl<P: FccoProblem> FccoProblem for Ball<P> {
    fn n_outer(&self) -> usize {
        self.inner.n_outer()
    }
    fn inner_size(&self, i: usize) -> usize {
        self.inner.inner_size(i)
    }
    fn d_prime(&self) -> usize {
        self.inner.d_prime()
    }
    fn dim_w(&self) -> usize {
        self.inner.dim_w()
    }
    fn g_sample(&self, w: &[f64], i: usize, j: usize, out: &mut [f64]) {
        self.inner.g_sample(w, i, j, out)
    }
    fn g_vjp_sample(&self, w: &[f64], i: usize, j: usize, a: &[f64], out: &mut [f64]) {
        self.inner.g_vjp_sample(w, i, j, a, out)
    }
    fn f_value(&self, i: usize, u: &[f64]) -> Result<f64> {
        self.inner.f_value(i, u)
    }
    fn f_grad(&self, i: usize, u: &[f64], out: &mut [f64]) -> Result<()> {
        self.inner.f_grad(i, u, out)
    }
    fn project(&self, w: &mut [f64]) {
        self.inner.project(w);
        project_ball(w, self.radius);
    }
    fn regularizer(&self, w: &[f64]) -> f64 {
        self.inner.regularizer(w)
    }
    fn regularizer_grad(&self, w: &[f64], out: &mut [f64]) {
        self.inner.regularizer_grad(w, out)
    }
    fn is_monotone_convex(&self) -> bool {
        self.inner.is_monotone_convex()
    }
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use itertools::Itertools;

    #[test]
    fn singleton_inner_set_is_the_sample() {
        let p = TableProblem::constant(vec![vec![4.5]], Outer::Identity);
        let mut s = [0.0];
        p.g_sample(&[0.0], 0, 0, &mut s);
        assert_eq!(g_full(&p, &[0.0], 0), vec![s[0]]);
    }

    #[test]
    fn g_full_is_arithmetic_mean() {
        let p = TableProblem::constant(vec![vec![1.0, 3.0]], Outer::Identity);
        assert_eq!(g_full(&p, &[0.0], 0), vec![2.0]);
    }

    #[test]
    fn g_batch_cases() {
        let p = TableProblem::constant(vec![vec![2.0, 1.0, 3.0, 5.0]], Outer::Identity);
        assert_eq!(g_batch(&p, &[0.0], 0, &[0]).unwrap(), vec![2.0]);
        assert_eq!(g_batch(&p, &[0.0], 0, &[0, 1, 2, 3]).unwrap(), g_full(&p, &[0.0], 0));
        assert_eq!(g_batch(&p, &[0.0], 0, &[]), Err(Error::EmptyInnerBatch));
        assert!(matches!(g_batch(&p, &[0.0], 0, &[7]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn size_one_batches_average_to_full_value() {
        let p = TableProblem::constant(vec![vec![1.0, 3.0, 5.0]], Outer::Identity);
        let mean: f64 = (0..3).map(|j| g_batch(&p, &[0.0], 0, &[j]).unwrap()[0]).sum::<f64>() / 3.0;
        assert_eq!(mean, 3.0);
        assert_eq!(g_full(&p, &[0.0], 0), vec![3.0]);
    }

    #[test]
    fn objective_with_identity_outer() {
        let p = TableProblem::constant(vec![vec![2.0]], Outer::Identity);
        assert_eq!(full_objective(&p, &[0.0]).unwrap(), 2.0);
    }

    #[test]
    fn gradient_of_linear_identity_is_mean_coefficient() {
        let coef = vec![
            vec![vec![1.0, 0.0], vec![3.0, 2.0]],
            vec![vec![-1.0, 4.0], vec![1.0, 2.0]],
        ];
        let p = TableProblem::linear(vec![vec![0.0, 0.0], vec![0.0, 0.0]], coef, Outer::Identity);
        let g = full_gradient(&p, &[0.3, -0.2]).unwrap();
        assert_eq!(&*g, &[1.0, 2.0]);
    }

    #[test]
    fn objective_overflow_names_index() {
        let p = TableProblem::constant(vec![vec![1.0], vec![f64::INFINITY]], Outer::Identity);
        assert_eq!(full_objective(&p, &[0.0]), Err(Error::ObjectiveOverflow { index: 1 }));
    }

    #[test]
    fn every_inner_batch_averages_to_full_value() {
        let values: Vec<f64> = (0..7).map(|k| libm::sin(k as f64) * 3.0).collect();
        let p = TableProblem::constant(vec![values], Outer::Identity);
        let full = g_full(&p, &[0.0], 0)[0];
        for b2 in 1..=7 {
            let batches: Vec<Vec<usize>> = (0..7).combinations(b2).collect();
            let mean = batches.iter().map(|b| g_batch(&p, &[0.0], 0, b).unwrap()[0]).sum::<f64>()
                / batches.len() as f64;
            assert!((mean - full).abs() <= 1e-12, "B2={b2}: {mean} vs {full}");
        }
    }

    #[test]
    fn ridge_adds_penalty_and_gradient() {
        let p = TableProblem::constant(vec![vec![2.0]], Outer::Identity);
        let r = Ridge::new(&p, 0.5);
        let w = [2.0];
        assert_eq!(full_objective(&r, &w).unwrap(), 2.0 + 0.25 * 4.0);
        assert_eq!(&*full_gradient(&r, &w).unwrap(), &[1.0]);
    }

    #[test]
    fn batch_spec_validation() {
        let p = TableProblem::constant(vec![vec![1.0, 2.0], vec![1.0, 2.0, 3.0]], Outer::Identity);
        assert!(BatchSpec::new(2, 2).validate(&p).is_ok());
        assert!(BatchSpec::new(0, 1).validate(&p).is_err());
        assert!(BatchSpec::new(3, 1).validate(&p).is_err());
        assert!(BatchSpec::new(1, 3).validate(&p).is_err());
        assert_eq!(BatchSpec::full(&p), BatchSpec::new(2, 2));
    }
}
