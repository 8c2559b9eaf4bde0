//! Generalized amplitude-amplification search.
//!
//! The crate simulates the amplitude-amplification operator
//! `Q = (2|a><a| - 1)(1 - 2 sum |t_i><t_i|)` for an arbitrary averaging
//! state `|a>` and an arbitrary starting superposition `|s>`, reduces any such
//! problem to a rotation in a two-dimensional plane, and uses the resulting
//! closed-form success probability to plan restart strategies for a single
//! searcher and for `k` searchers racing in parallel.
//!
//! * [`statevector`]: dense simulation, the ground truth for everything else.
//! * [`analytic`]: the rotation-plane decomposition and closed forms.
//! * [`strategy`]: expected-cost models and optimal iteration counts.
//! * [`montecarlo`]: seeded restart experiments.
//! * [`figures`]: data tables for the probability heatmap and the
//!   parallelism sweep.

pub mod analytic;
mod error;
pub mod figures;
pub mod montecarlo;
pub mod numeric;
pub mod statefile;
pub mod statevector;
pub mod strategy;

pub use analytic::{
    biham_mapping, decompose, grover_case_prob, optimal_iterations_analytic, rotation_angle,
    success_prob_analytic, BihamMapping, Decomposition, Maximum,
};
pub use error::{Error, Result};
pub use montecarlo::{Estimate, ParallelEstimate};
pub use statevector::{
    grover_power, oracle_reflect, random_state, reflect_about, success_probability, uniform_state,
    SearchInstance, StateVector, TargetSet,
};
pub use strategy::{ParallelPlan, PlanMethod, PunctuatedPlan};

pub use num_complex::Complex64;
