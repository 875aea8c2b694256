//! Finite-sum coupled compositional optimization.
//!
//! Objectives of the form `F(w) = (1/n) Σ_i f_i(g(w; z_i, S_i))`, where the inner
//! value `g` is a mean over an index-specific finite set `S_i`. The crate
//! provides the problem abstraction ([`FccoProblem`]), the moving-average
//! trackers, the SOX optimizer family with its baselines, four concrete
//! objectives over linear models, synthetic data generators, and brute-force
//! oracles used to check all of the above.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! and the command-line harness live in the `fcco` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

mod error;
mod math;

pub mod data;
pub mod objectives;
pub mod optim;
pub mod problem;
pub mod tracker;
pub mod verify;

pub use error::{Error, Result};
pub use problem::{
    full_gradient, full_objective, g_batch, g_full, project_ball, Ball, BatchSpec, FccoProblem, ParamVector, Ridge,
};
pub use tracker::{tracker_error, MomentumVector, TrackerTable};

/// Random source used everywhere a sample is drawn.
///
/// ChaCha8 keeps streams bit-identical across platforms for a given seed.
pub type FccoRng = rand_chacha::ChaCha8Rng;

/// Builds the run RNG from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> FccoRng {
    use rand::SeedableRng;
    FccoRng::seed_from_u64(seed)
}
