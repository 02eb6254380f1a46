//! Best-arm identification under unknown safety constraints.
//!
//! The crate provides ground-truth environments for linear and monotonic
//! responses, the two elimination algorithms, closed-form complexity
//! quantities and a seeded multi-trial harness.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod env;
pub mod error;
pub mod harness;
pub mod linear;
pub mod monotonic;
pub mod run;
pub mod theory;
pub mod trace;

pub use env::{trial_rng, trial_seed, Curve, Environment, Family, LinearInstance, MonotonicInstance, Observation};
pub use error::{Error, Result};
pub use harness::{run_trials, Aggregate, Algorithm, Problem, TrialConfig, TrialSet};
pub use linear::run_linear;
pub use monotonic::run_monotonic;
pub use run::{Limits, RunResult, Stop};
pub use theory::TheoryReport;
pub use trace::{PullRole, PullTrace, TraceEntry};
