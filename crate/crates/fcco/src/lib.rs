//! File formats, experiment configuration and the sweep harness on top of
//! [`fcco_core`].

pub mod config;
pub mod error;
pub mod harness;
pub mod libsvm;

pub use config::{ExperimentConfig, MethodKind, RawConfig};
pub use error::{HarnessError, Result};
pub use harness::{
    compare_optimizers, gradcheck, run_experiment, sweep_gamma, sweep_q1, sweep_q2, Experiment, Report,
};
pub use libsvm::{parse_libsvm, read_libsvm, write_libsvm};
