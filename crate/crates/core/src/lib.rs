//! Derivative-free minimization of smooth, strictly quasi-convex functions
//! using only pairwise comparisons.
//!
//! The toolkit never reads objective values. Its only probe is a comparison
//! oracle ([`CountingOracle`]) answering "is f(x) ≥ f(y)?", and from that it
//! builds:
//!
//! * a one-query *directional preference test*
//!   ([`directional_preference`]) certifying a one-sided bound on a
//!   directional derivative;
//! * a gradient-direction estimator ([`estimate_direction`]) accurate to a
//!   requested δ wherever the gradient norm clears a floor γ, at a
//!   deterministic cost given in closed form by [`query_budget`];
//! * normalized gradient descent ([`normalized_descent`],
//!   [`comparison_descent`]) with the dimension-free step schedule
//!   `D/√(2k)`, driving the gradient projection
//!   ([`gradient_projection`]) of the best iterate below a target ε;
//! * benchmark objectives with certified smoothness constants and known
//!   minimizers ([`make_benchmark`]), run metrics, and an experiment
//!   harness ([`run_experiment`]) with deterministic seeding and CSV
//!   export.
//!
//! The [`acceptance`] module packages the quantitative guarantees as seven
//! pass/fail criteria.
//!
//! # Example
//!
//! Estimate the gradient direction of a quadratic at a point, spending
//! exactly the advertised number of comparisons:
//!
//! ```
//! use ordermin::{
//!     estimate_direction, make_benchmark, query_budget, BenchmarkParams, CountingOracle, Vector,
//! };
//!
//! let objective = make_benchmark("quadratic", 2, &BenchmarkParams::default())?;
//! let mut oracle = CountingOracle::new(objective);
//! let x = Vector::new(vec![3.0, 4.0])?;
//! // ∇f ∝ (3, 4) here, so the estimate lands near (0.6, 0.8).
//! let estimate = estimate_direction(&mut oracle, 1.0, &x, 0.1, 1.0)?;
//! assert_eq!(estimate.queries_used, query_budget(2, 0.1)?);
//! assert!((estimate.direction[0] - 0.6).abs() <= 0.1);
//! assert!((estimate.direction[1] - 0.8).abs() <= 0.1);
//! # Ok::<(), ordermin::Error>(())
//! ```

pub mod acceptance;
pub mod benchmark;
pub mod descent;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod metrics;
mod numeric;
pub mod objective;
pub mod oracle;
pub mod vector;

pub use acceptance::{all_passed, run_all, CriterionOutcome};
pub use benchmark::{make_benchmark, BenchmarkFamily, BenchmarkParams, BenchmarkRegistry};
pub use descent::{
    comparison_descent, normalized_descent, step_size, ComparisonEstimator, DescentSchedule,
    DirectionEstimator, ExactDirectionEstimator, RunTrace, TraceStep,
};
pub use error::{Error, Result};
pub use estimation::{
    binary_search_iters, directional_preference, estimate_direction, query_budget,
    DirectionEstimate, DpAnswer, UNIT_NORM_TOL,
};
pub use harness::{
    parse_config_text, run_experiment, run_experiment_with, sample_initial_point, write_csv,
    AlgorithmRegistry, AlgorithmStrategy, ExperimentConfig, ExperimentRun, ResolvedRun, RunStatus,
    SummaryReport,
};
pub use metrics::{
    check_hypotheses, convergence_bound, evaluate_trace, gradient_projection, select_best,
    BestIterate, EvalRecord, HypothesisReport, ZERO_GRADIENT_NORM,
};
pub use objective::Objective;
pub use oracle::{CountingOracle, Sign};
pub use vector::Vector;
