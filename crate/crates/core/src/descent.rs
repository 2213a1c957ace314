//! Normalized gradient descent with a pluggable direction source.
//!
//! The driver [`normalized_descent`] iterates `x_{k+1} = x_k − h_k·g_k`
//! where `g_k` is a unit-norm gradient-direction estimate supplied by a
//! [`DirectionEstimator`] and `h_k = D/√(2k)` ([`step_size`]) is the
//! dimension-free schedule tuned to an initial distance bound `D`. Because
//! only the *direction* of the gradient enters, the driver runs unchanged
//! whether directions come from analytic gradients
//! ([`ExactDirectionEstimator`]) or from comparison queries
//! ([`ComparisonEstimator`]).
//!
//! [`comparison_descent`] bundles the full comparison-based pipeline: it
//! derives the iteration count and estimation accuracy from a target `ε` via
//! [`DescentSchedule::for_target`] and drives the shared loop.

use crate::error::{Error, Result};
use crate::estimation::{estimate_direction, query_budget};
use crate::metrics::ZERO_GRADIENT_NORM;
use crate::numeric::ceil_tolerant;
use crate::objective::Objective;
use crate::oracle::CountingOracle;
use crate::vector::Vector;

/// Unit-norm tolerance the driver enforces on estimator output.
const DIRECTION_NORM_TOL: f64 = 1e-9;

/// Step length `d_bound/√(2k)` for (1-based) iteration `k`.
///
/// # Panics
/// On `k == 0` or a non-positive/non-finite `d_bound`; both indicate caller
/// bugs rather than data-dependent conditions.
pub fn step_size(k: u64, d_bound: f64) -> f64 {
    assert!(k >= 1, "iterations are 1-based");
    assert!(
        d_bound.is_finite() && d_bound > 0.0,
        "distance bound must be positive and finite, got {d_bound}"
    );
    d_bound / (2.0 * k as f64).sqrt()
}

/// Source of unit-norm gradient-direction estimates for the descent driver.
pub trait DirectionEstimator {
    /// Estimate of ∇f(x)/‖∇f(x)‖ at `x`; must be unit norm within 1e-9.
    fn estimate(&mut self, x: &Vector) -> Result<Vector>;

    /// Comparison queries spent so far by this estimator (0 for sources
    /// that never query an oracle).
    fn queries_used(&self) -> u64 {
        0
    }
}

/// Directions from the objective's analytic gradient — the idealized
/// baseline the comparison-based estimator is measured against.
#[derive(Clone, Debug)]
pub struct ExactDirectionEstimator {
    objective: Objective,
}

impl ExactDirectionEstimator {
    /// # Errors
    /// [`Error::Unsupported`] if the objective exposes no gradient.
    pub fn new(objective: Objective) -> Result<Self> {
        if !objective.has_grad() {
            return Err(Error::Unsupported(format!(
                "objective '{}' exposes no analytic gradient",
                objective.name()
            )));
        }
        Ok(Self { objective })
    }
}

impl DirectionEstimator for ExactDirectionEstimator {
    fn estimate(&mut self, x: &Vector) -> Result<Vector> {
        let grad = self
            .objective
            .grad(x)
            .expect("constructor verified the gradient exists");
        // At a numerically stationary point every direction is equally
        // uninformative; return a fixed axis to keep the unit-norm contract.
        match grad.normalized() {
            Some(unit) if grad.norm() > ZERO_GRADIENT_NORM => Ok(unit),
            _ => Ok(Vector::basis(x.dim(), 0)),
        }
    }
}

/// Directions from comparison queries, at a fixed per-call accuracy
/// `delta` and gradient floor `gamma`. Owns its oracle; query accounting is
/// relative to construction time, so a pre-used oracle still yields
/// run-local counts.
#[derive(Debug)]
pub struct ComparisonEstimator {
    oracle: CountingOracle,
    smoothness: f64,
    delta: f64,
    gamma: f64,
    base: u64,
}

impl ComparisonEstimator {
    /// # Errors
    /// Rejects `delta` outside (0, 1] and non-positive `gamma` or
    /// `smoothness`.
    pub fn new(oracle: CountingOracle, smoothness: f64, delta: f64, gamma: f64) -> Result<Self> {
        query_budget(oracle.objective().dim(), delta)?;
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "gamma must be positive and finite, got {gamma}"
            )));
        }
        if !(smoothness.is_finite() && smoothness > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "smoothness must be positive and finite, got {smoothness}"
            )));
        }
        let base = oracle.query_count();
        Ok(Self {
            oracle,
            smoothness,
            delta,
            gamma,
            base,
        })
    }

    pub fn oracle(&self) -> &CountingOracle {
        &self.oracle
    }

    pub fn into_oracle(self) -> CountingOracle {
        self.oracle
    }
}

impl DirectionEstimator for ComparisonEstimator {
    fn estimate(&mut self, x: &Vector) -> Result<Vector> {
        estimate_direction(&mut self.oracle, self.smoothness, x, self.delta, self.gamma)
            .map(|estimate| estimate.direction)
    }

    fn queries_used(&self) -> u64 {
        self.oracle.query_count() - self.base
    }
}

/// Same as [`ComparisonEstimator`] but borrowing the oracle, so a driver can
/// hand the ledger back to its caller afterwards.
struct BorrowedComparisonEstimator<'a> {
    oracle: &'a mut CountingOracle,
    smoothness: f64,
    delta: f64,
    gamma: f64,
    base: u64,
}

impl DirectionEstimator for BorrowedComparisonEstimator<'_> {
    fn estimate(&mut self, x: &Vector) -> Result<Vector> {
        estimate_direction(self.oracle, self.smoothness, x, self.delta, self.gamma)
            .map(|estimate| estimate.direction)
    }

    fn queries_used(&self) -> u64 {
        self.oracle.query_count() - self.base
    }
}

/// One recorded iteration: the iterate *before* the update it describes.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    /// 1-based iteration index.
    pub iter: u64,
    /// The iterate x_k at which the direction was estimated.
    pub point: Vector,
    /// Step length h_k applied to leave this point.
    pub step: f64,
    /// Total comparison queries spent by the run once this point's
    /// direction was available (k times the per-call budget for
    /// comparison-based runs, 0 for exact-gradient runs).
    pub queries_cumulative: u64,
}

/// Full record of a descent run: iterates x_1 … x_N and the query ledger.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub steps: Vec<TraceStep>,
    /// Comparison queries spent over the whole run.
    pub total_queries: u64,
}

/// Iteration count and estimation parameters derived from a target accuracy.
///
/// For a distance bound `D` and target `ε`, the projection criterion
/// min_k ⟨g_k, x_k − x*⟩ ≤ ε is met after `N = ⌈18D²/ε²⌉` iterations with
/// per-call direction accuracy `δ = ε/(2D)` and gradient floor `γ = ε`:
/// the run's guarantee `3D/√(2N) + δD` then evaluates to at most
/// `ε/2 + ε/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentSchedule {
    pub iters: u64,
    pub delta: f64,
    pub gamma: f64,
}

impl DescentSchedule {
    /// # Errors
    /// Requires positive finite inputs with `epsilon ≤ 2·d_bound`
    /// (otherwise the implied per-call accuracy δ would exceed 1).
    pub fn for_target(d_bound: f64, epsilon: f64) -> Result<Self> {
        if !(d_bound.is_finite() && d_bound > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "distance bound must be positive and finite, got {d_bound}"
            )));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        if epsilon > 2.0 * d_bound {
            return Err(Error::InvalidArgument(format!(
                "epsilon ({epsilon}) must not exceed twice the distance bound ({d_bound}): \
                 the implied per-call accuracy would leave (0, 1]"
            )));
        }
        let iters = ceil_tolerant(18.0 * d_bound * d_bound / (epsilon * epsilon)) as u64;
        Ok(Self {
            iters,
            delta: epsilon / (2.0 * d_bound),
            gamma: epsilon,
        })
    }
}

/// Runs `iters` normalized descent steps from `x1`, recording every iterate.
///
/// Each step asks the estimator for a direction at the current point,
/// records the point together with the step length and the estimator's
/// cumulative query count, then moves. The recorded points are therefore
/// x_1 … x_N — the candidate set a caller selects a solution from — not the
/// never-evaluated final update.
///
/// # Errors
/// * [`Error::ContractViolation`] if the estimator returns a non-unit
///   vector;
/// * [`Error::NumericalFailure`] (carrying the partial trace) if an iterate
///   stops being finite or the estimator fails mid-run.
pub fn normalized_descent(
    estimator: &mut dyn DirectionEstimator,
    x1: &Vector,
    d_bound: f64,
    iters: u64,
) -> Result<RunTrace> {
    if !(d_bound.is_finite() && d_bound > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "distance bound must be positive and finite, got {d_bound}"
        )));
    }
    if iters == 0 {
        return Err(Error::InvalidArgument(
            "iteration count must be at least 1".into(),
        ));
    }
    let mut steps = Vec::with_capacity(usize::try_from(iters).unwrap_or(0));
    let mut x = x1.clone();
    for k in 1..=iters {
        let direction = match estimator.estimate(&x) {
            Ok(direction) => direction,
            Err(source) => {
                return Err(Error::NumericalFailure {
                    iter: k,
                    reason: format!("direction estimation failed: {source}"),
                    trace: Box::new(RunTrace {
                        steps,
                        total_queries: estimator.queries_used(),
                    }),
                });
            }
        };
        if (direction.norm() - 1.0).abs() > DIRECTION_NORM_TOL {
            return Err(Error::ContractViolation(format!(
                "direction estimator returned a non-unit vector (norm {}) at iteration {k}",
                direction.norm()
            )));
        }
        let h = step_size(k, d_bound);
        steps.push(TraceStep {
            iter: k,
            point: x.clone(),
            step: h,
            queries_cumulative: estimator.queries_used(),
        });
        x = x.add_scaled(-h, &direction);
        if !x.is_finite() {
            return Err(Error::NumericalFailure {
                iter: k,
                reason: "iterate became non-finite after the update".into(),
                trace: Box::new(RunTrace {
                    total_queries: estimator.queries_used(),
                    steps,
                }),
            });
        }
    }
    Ok(RunTrace {
        total_queries: estimator.queries_used(),
        steps,
    })
}

/// Comparison-only minimization to projection accuracy `epsilon`: derives
/// the schedule from `(d_bound, epsilon)`, then runs [`normalized_descent`]
/// with comparison-based direction estimates against `oracle`.
///
/// The returned trace's query counts are relative to the call (a pre-used
/// oracle is fine); the oracle's own ledger keeps its global total.
pub fn comparison_descent(
    oracle: &mut CountingOracle,
    smoothness: f64,
    x1: &Vector,
    d_bound: f64,
    epsilon: f64,
) -> Result<(RunTrace, DescentSchedule)> {
    let schedule = DescentSchedule::for_target(d_bound, epsilon)?;
    if !(smoothness.is_finite() && smoothness > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "smoothness must be positive and finite, got {smoothness}"
        )));
    }
    let dim = oracle.objective().dim();
    if x1.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: x1.dim(),
        });
    }
    query_budget(dim, schedule.delta)?;
    let base = oracle.query_count();
    let mut estimator = BorrowedComparisonEstimator {
        oracle,
        smoothness,
        delta: schedule.delta,
        gamma: schedule.gamma,
        base,
    };
    let trace = normalized_descent(&mut estimator, x1, d_bound, schedule.iters)?;
    Ok((trace, schedule))
}
