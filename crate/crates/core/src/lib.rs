//! Scheduling of preemptible jobs on identical machines, minimizing total
//! weighted tardiness (TWT).
//!
//! A schedule for `N` jobs over `L` unit time slots is a binary `N x L`
//! matrix: entry `(i, j)` is 1 iff job `i` runs during slot `j`. Each job `i`
//! needs `x_i` units of work before its cutoff slot `K_i`, at most `V` jobs
//! run per slot, and finishing late costs `w_i` per slot of tardiness.
//!
//! The crate provides:
//!
//! - [`model`]: instance and schedule types, tardiness evaluation and
//!   feasibility diagnostics;
//! - [`qp`]: the quadratic-energy encoding of the problem (objective plus
//!   job-size and capacity penalties) and its zero-diagonal Hopfield form;
//! - [`hnn`]: the asynchronous Hopfield descent, the schedule-repair pass and
//!   the multi-restart solver driver;
//! - [`baselines`]: EDD / WSPT / LWPF / LBS / random dispatch heuristics;
//! - [`oracle`]: exact branch-and-bound minimum for desk-size instances;
//! - [`generator`]: the seeded random instance generator used by benchmarks;
//! - [`io`]: versioned JSON file formats for instances and schedules.
//!
//! Numeric code is generic over the scalar type via [`scalar::Scalar`]
//! (`f32` or `f64`); the aliases below fix `f64` as the default precision.

pub mod baselines;
mod error;
pub mod generator;
pub mod hnn;
pub mod io;
pub mod model;
pub mod oracle;
pub mod qp;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use model::{ProblemInstance, Schedule, ScheduleDiagnostics};
pub use scalar::Scalar;

/// Problem instance at default (`f64`) precision.
pub type Instance = model::ProblemInstance<f64>;
/// Assembled quadratic form at default precision.
pub type Quadratic = qp::QuadraticForm<f64>;
/// Hopfield-transformed form at default precision.
pub type HopfieldNet = qp::HopfieldForm<f64>;
/// Solver configuration at default precision.
pub type Config = hnn::SolverConfig<f64>;
/// Single-precision instance, for memory-constrained embeddings.
pub type Instance32 = model::ProblemInstance<f32>;
