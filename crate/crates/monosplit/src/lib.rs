//! Stochastic inertial forward-backward-forward splitting for monotone
//! inclusions `0 in A x + B x`, a stochastic primal-dual variant for
//! saddle-point problems, and a desk-scale experiment harness that checks
//! the method's per-iteration inequalities, non-asymptotic recursion
//! bounds, and convergence-rate predictions numerically.
//!
//! The ambient Hilbert space is realized as `R^d`; in finite dimension the
//! weak/strong convergence distinction collapses, so the "convergence"
//! checks here are plain distance-to-reference checks.
//!
//! Main entry points:
//! - [`operators`]: catalog of resolvents / proximity operators.
//! - [`oracles`]: stochastic estimators, noise and step schedules,
//!   reproducible random streams.
//! - [`fbf`]: the inertial forward-backward-forward iteration and its
//!   composite-minimization specialization.
//! - [`rates`]: recursion bounds and log-log rate fitting.
//! - [`saddle`]: the stochastic primal-dual iteration, gap function, and
//!   gap certificates.
//! - [`problems`]: reproducible benchmark instances with verified
//!   reference solutions.
//! - [`harness`]: Monte-Carlo replication, aggregation, CSV/JSON output.
//! - [`validate`]: the invariant suites behind `monosplit validate`.
//!
//! The `examples/` directory holds one runnable example per capability;
//! the thin `monosplit` binary exposes the same drivers as subcommands
//! (`run`, `pd-run`, `rate-fit`, `validate`, `gen-benchmark`).

pub mod error;
pub mod fbf;
pub mod jsonio;
pub mod linalg;
pub mod operators;
pub mod oracles;
pub mod rates;
mod rng;

pub use error::{Error, Result};
pub use fbf::{
    composite_step, fbf_step, lemma32_residual, lemma32_scan, run_fbf, CompositeConfig, FbfConfig,
    FbfState, StepRecord, Trajectory, TrajectoryPoint,
};
pub use operators::{
    conjugate_prox, estimate_lipschitz, resolve, LipOperator, MonotoneMap, Point, ProxFunction,
};
pub use oracles::{
    inertia_coefficient, validate_summability, EpsilonSchedule, NoiseModel, RngStream,
    StepSchedule, StochasticOracle, SummabilityReport, SummabilityVerdict,
};
pub use rates::{
    fit_rate, lemma36_bound, phi_c, simulate_recursion, theory_slope, RateVerdict,
    RecursionParams, TheoryParams,
};
