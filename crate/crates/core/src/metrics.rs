//! Progress measures and run verification.
//!
//! The central quantity is the gradient projection
//! ([`gradient_projection`]): the component of `x − y` along the normalized
//! gradient at `x`. For a smooth strictly quasi-convex objective with
//! minimizer `x*`, driving `⟨∇f(x)/‖∇f(x)‖, x − x*⟩` below ε is the
//! criterion normalized descent optimizes, and [`convergence_bound`] gives
//! the guaranteed value after a given number of steps.
//!
//! [`evaluate_trace`] replays a recorded run against an objective's
//! analytic gradient and known minimizer, and [`check_hypotheses`] verifies
//! after the fact that the run stayed inside the assumptions the guarantee
//! leans on.

use crate::descent::RunTrace;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::vector::Vector;

/// Gradient norms at or below this threshold are treated as exactly zero —
/// the projection is defined as 0 there (the point is numerically
/// stationary, so any "direction to the minimizer" claim is noise).
pub const ZERO_GRADIENT_NORM: f64 = 1e-15;

/// Projection of `x − y` onto the normalized gradient direction `grad/‖grad‖`:
/// the signed distance the minimizer-candidate `y` lies "behind" `x` along
/// the gradient. Zero when `‖grad‖ ≤` [`ZERO_GRADIENT_NORM`].
///
/// Bounded by `‖x − y‖` in magnitude and invariant under positive scaling
/// of `grad`.
///
/// # Errors
/// [`Error::DimensionMismatch`] when the three vectors disagree on dimension.
pub fn gradient_projection(grad: &Vector, x: &Vector, y: &Vector) -> Result<f64> {
    if grad.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: grad.dim(),
        });
    }
    if y.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: y.dim(),
        });
    }
    match grad.normalized() {
        Some(unit) if grad.norm() > ZERO_GRADIENT_NORM => Ok(unit.dot(&x.sub(y))),
        _ => Ok(0.0),
    }
}

/// Guaranteed best-iterate projection after `iters` normalized descent
/// steps with distance bound `d_bound` and per-step direction error at most
/// `delta`: `3·d_bound/√(2·iters) + delta·d_bound`. Pass `delta = 0` for
/// exact-gradient runs.
///
/// # Errors
/// Rejects non-positive/non-finite `d_bound`, `iters == 0`, and a negative
/// or non-finite `delta`.
pub fn convergence_bound(d_bound: f64, iters: u64, delta: f64) -> Result<f64> {
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
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "direction error must be non-negative and finite, got {delta}"
        )));
    }
    Ok(3.0 * d_bound / (2.0 * iters as f64).sqrt() + delta * d_bound)
}

/// One recorded iterate scored against the objective's analytics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalRecord {
    /// 1-based iteration index.
    pub iter: u64,
    /// Projection of `x_k − x*` onto the normalized gradient at `x_k`.
    pub projection: f64,
    /// `f(x_k) − f(x*)`.
    pub objective_gap: f64,
    /// `‖x_k − x*‖`.
    pub distance: f64,
    /// Comparison queries spent once this iterate's direction was known.
    pub queries_cumulative: u64,
}

/// Scores every recorded iterate of a run against the objective's analytic
/// gradient and known minimizer. An empty trace yields an empty list.
///
/// # Errors
/// [`Error::Unsupported`] when the objective lacks a gradient or a known
/// minimizer; dimension mismatches propagate from the underlying calls.
pub fn evaluate_trace(trace: &RunTrace, objective: &Objective) -> Result<Vec<EvalRecord>> {
    let minimizer = known_minimizer(objective)?;
    let f_star = objective.eval(minimizer);
    let mut records = Vec::with_capacity(trace.steps.len());
    for step in &trace.steps {
        let grad = objective.grad(&step.point).ok_or_else(|| {
            Error::Unsupported(format!(
                "objective '{}' exposes no analytic gradient",
                objective.name()
            ))
        })?;
        records.push(EvalRecord {
            iter: step.iter,
            projection: gradient_projection(&grad, &step.point, minimizer)?,
            objective_gap: objective.eval(&step.point) - f_star,
            distance: step.point.distance(minimizer),
            queries_cumulative: step.queries_cumulative,
        });
    }
    Ok(records)
}

/// The iterate a finished run reports as its answer.
#[derive(Clone, Debug, PartialEq)]
pub enum BestIterate {
    /// The recorded iterate with the smallest gradient projection —
    /// available when the objective exposes a gradient and minimizer.
    ByProjection {
        iter: u64,
        projection: f64,
        point: Vector,
    },
    /// Fallback when no analytics are available to rank iterates: the last
    /// recorded point.
    LastIterate { iter: u64, point: Vector },
}

impl BestIterate {
    pub fn iter(&self) -> u64 {
        match self {
            BestIterate::ByProjection { iter, .. } | BestIterate::LastIterate { iter, .. } => *iter,
        }
    }

    pub fn point(&self) -> &Vector {
        match self {
            BestIterate::ByProjection { point, .. } | BestIterate::LastIterate { point, .. } => {
                point
            }
        }
    }
}

/// Selects the iterate a run should report: the projection argmin when the
/// objective's analytics allow scoring, otherwise the last iterate.
///
/// # Errors
/// [`Error::InvalidArgument`] on an empty trace.
pub fn select_best(trace: &RunTrace, objective: &Objective) -> Result<BestIterate> {
    let Some(last) = trace.steps.last() else {
        return Err(Error::InvalidArgument(
            "cannot select a best iterate from an empty trace".into(),
        ));
    };
    if known_minimizer(objective).is_err() {
        return Ok(BestIterate::LastIterate {
            iter: last.iter,
            point: last.point.clone(),
        });
    }
    let records = evaluate_trace(trace, objective)?;
    let best = records
        .iter()
        .zip(&trace.steps)
        .min_by(|(a, _), (b, _)| a.projection.total_cmp(&b.projection))
        .expect("trace verified non-empty");
    Ok(BestIterate::ByProjection {
        iter: best.0.iter,
        projection: best.0.projection,
        point: best.1.point.clone(),
    })
}

/// After-the-fact audit of the assumptions behind the convergence
/// guarantee, produced by [`check_hypotheses`].
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    /// Largest ‖x_k − x*‖ over the recorded iterates.
    pub max_distance: f64,
    /// Whether every recorded iterate stayed within the distance bound.
    pub distance_within_bound: bool,
    /// First (1-based) iterate whose projection reached the target, when a
    /// target was given and some iterate attained it.
    pub first_target_hit: Option<u64>,
    /// Smallest gradient norm over the iterates that still *needed* an
    /// accurate direction — those strictly before the first target hit
    /// (all iterates when no target was given or none attained it). `None`
    /// when that prefix is empty.
    pub min_prefix_gradient_norm: Option<f64>,
    /// Whether the requested gradient floor held on that prefix (`None`
    /// when no floor was requested; vacuously true on an empty prefix).
    pub gradient_floor_holds: Option<bool>,
}

/// Audits a recorded run against the guarantee's hypotheses: iterates stay
/// within `d_bound` of the minimizer, and — when `gradient_floor` is given —
/// the gradient norm clears the floor on every iterate that still needed an
/// accurate direction estimate.
///
/// The floor is only checked on iterates strictly before the first one whose
/// projection reaches `target`: once some iterate already certifies the
/// target, later direction estimates no longer influence the reported best,
/// so a vanishing gradient near the minimizer does not void the guarantee.
///
/// # Errors
/// [`Error::InvalidArgument`] on an empty trace; [`Error::Unsupported`]
/// when the objective lacks analytics.
pub fn check_hypotheses(
    trace: &RunTrace,
    objective: &Objective,
    d_bound: f64,
    gradient_floor: Option<f64>,
    target: Option<f64>,
) -> Result<HypothesisReport> {
    if !(d_bound.is_finite() && d_bound > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "distance bound must be positive and finite, got {d_bound}"
        )));
    }
    if trace.steps.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot audit an empty trace".into(),
        ));
    }
    let records = evaluate_trace(trace, objective)?;
    let max_distance = records.iter().map(|r| r.distance).fold(0.0, f64::max);
    let first_target_hit = target.and_then(|t| {
        records
            .iter()
            .find(|r| r.projection <= t)
            .map(|r| r.iter)
    });
    let prefix_end = match first_target_hit {
        Some(iter) => trace
            .steps
            .iter()
            .position(|s| s.iter == iter)
            .expect("hit comes from the same trace"),
        None => trace.steps.len(),
    };
    let min_prefix_gradient_norm = trace.steps[..prefix_end]
        .iter()
        .map(|s| {
            objective
                .grad(&s.point)
                .expect("evaluate_trace verified the gradient exists")
                .norm()
        })
        .fold(None, |acc: Option<f64>, norm| {
            Some(acc.map_or(norm, |a| a.min(norm)))
        });
    let gradient_floor_holds = gradient_floor
        .map(|floor| min_prefix_gradient_norm.is_none_or(|min| min >= floor));
    Ok(HypothesisReport {
        max_distance,
        distance_within_bound: max_distance <= d_bound,
        first_target_hit,
        min_prefix_gradient_norm,
        gradient_floor_holds,
    })
}

fn known_minimizer(objective: &Objective) -> Result<&Vector> {
    if !objective.has_grad() {
        return Err(Error::Unsupported(format!(
            "objective '{}' exposes no analytic gradient",
            objective.name()
        )));
    }
    objective.minimizer().ok_or_else(|| {
        Error::Unsupported(format!(
            "objective '{}' has no known minimizer",
            objective.name()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::{make_benchmark, BenchmarkParams};
    use crate::descent::TraceStep;
    use crate::test_util::{sample_in_ball, seeded_rng};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn trace_of(points: &[Vector]) -> RunTrace {
        RunTrace {
            steps: points
                .iter()
                .enumerate()
                .map(|(i, p)| TraceStep {
                    iter: i as u64 + 1,
                    point: p.clone(),
                    step: 1.0,
                    queries_cumulative: 10 * (i as u64 + 1),
                })
                .collect(),
            total_queries: 10 * points.len() as u64,
        }
    }

    #[test]
    fn projection_matches_hand_value() {
        let grad = Vector::new(vec![2.0, 0.0]).unwrap();
        let x = Vector::new(vec![1.0, 1.0]).unwrap();
        let y = Vector::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(gradient_projection(&grad, &x, &y).unwrap(), 1.0);
        // Sign flips with the roles of x and y.
        assert_eq!(gradient_projection(&grad, &y, &x).unwrap(), -1.0);
    }

    #[test]
    fn projection_of_zero_gradient_is_zero() {
        let grad = Vector::new(vec![0.0, 1e-16]).unwrap();
        let x = Vector::new(vec![5.0, -3.0]).unwrap();
        let y = Vector::zeros(2);
        assert_eq!(gradient_projection(&grad, &x, &y).unwrap(), 0.0);
    }

    #[test]
    fn projection_rejects_mismatched_dimensions() {
        let g2 = Vector::zeros(2);
        let g3 = Vector::zeros(3);
        assert!(gradient_projection(&g3, &g2, &g2).is_err());
        assert!(gradient_projection(&g2, &g2, &g3).is_err());
    }

    #[test]
    fn bound_matches_hand_values() {
        // 3·5/√400 = 0.75, exactly representable.
        assert_eq!(convergence_bound(5.0, 200, 0.0).unwrap(), 0.75);
        assert_relative_eq!(
            convergence_bound(3.0, 1800, 0.05).unwrap(),
            0.3,
            max_relative = 1e-12
        );
        assert!(convergence_bound(1.0, 0, 0.0).is_err());
        assert!(convergence_bound(1.0, 10, -0.1).is_err());
        assert!(convergence_bound(0.0, 10, 0.0).is_err());
    }

    #[test]
    fn convex_objectives_have_nonnegative_projections_toward_the_minimizer() {
        let mut rng = seeded_rng(41);
        let params = BenchmarkParams {
            center: Some(vec![0.4, -0.2, 0.0]),
            spectrum: Some(vec![0.5, 1.0, 2.0]),
        };
        let f = make_benchmark("quadratic", 3, &params).unwrap();
        let minimizer = f.minimizer().unwrap().clone();
        for _ in 0..500 {
            let x = minimizer.add_scaled(1.0, &sample_in_ball(&mut rng, 3, 4.0));
            let grad = f.grad(&x).unwrap();
            let v = gradient_projection(&grad, &x, &minimizer).unwrap();
            assert!(v >= 0.0);
            // Convexity: f(x) − f(x*) ≤ ⟨∇f(x), x − x*⟩ = ‖∇f(x)‖·v.
            let gap = f.eval(&x) - f.eval(&minimizer);
            assert!(grad.norm() * v >= gap - 1e-9, "gap {gap} vs {}", grad.norm() * v);
        }
    }

    proptest! {
        #[test]
        fn projection_is_bounded_by_the_distance(
            g in proptest::collection::vec(-1e6f64..1e6, 1..6),
            xy in proptest::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 1..6),
            scale in 1e-6f64..1e6,
        ) {
            let dim = g.len().min(xy.len());
            let grad = Vector::new(g[..dim].to_vec()).unwrap();
            let x = Vector::new(xy[..dim].iter().map(|p| p.0).collect()).unwrap();
            let y = Vector::new(xy[..dim].iter().map(|p| p.1).collect()).unwrap();
            let v = gradient_projection(&grad, &x, &y).unwrap();
            let dist = x.distance(&y);
            prop_assert!(v.abs() <= dist * (1.0 + 1e-12) + 1e-12);
            // A point projects nowhere relative to itself.
            prop_assert_eq!(gradient_projection(&grad, &x, &x).unwrap(), 0.0);
            // Positive rescaling of the gradient cannot move the projection
            // (up to ulp noise of normalization, amplified by the distance).
            if grad.norm() > 1e-9 {
                let rescaled = gradient_projection(&grad.scaled(scale), &x, &y).unwrap();
                prop_assert!((rescaled - v).abs() <= 1e-12 * (1.0 + dist));
            }
        }
    }

    #[test]
    fn trace_evaluation_matches_hand_values() {
        let f = make_benchmark("quadratic", 2, &BenchmarkParams::default()).unwrap();
        let trace = trace_of(&[
            Vector::new(vec![3.0, 4.0]).unwrap(),
            Vector::new(vec![1.0, 0.0]).unwrap(),
        ]);
        let records = evaluate_trace(&trace, &f).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].iter, 1);
        assert_eq!(records[0].distance, 5.0);
        assert_relative_eq!(records[0].projection, 5.0, max_relative = 1e-14);
        assert_relative_eq!(records[0].objective_gap, 12.5, max_relative = 1e-14);
        assert_eq!(records[0].queries_cumulative, 10);
        assert_eq!(records[1].distance, 1.0);
        assert_relative_eq!(records[1].objective_gap, 0.5, max_relative = 1e-14);
        assert_eq!(records[1].queries_cumulative, 20);
        // An empty trace scores to an empty list, not an error.
        let empty = RunTrace { steps: vec![], total_queries: 0 };
        assert!(evaluate_trace(&empty, &f).unwrap().is_empty());
    }

    #[test]
    fn trace_evaluation_requires_analytics() {
        let gradless = Objective::new("gradless", 1, 1.0, |x: &Vector| x[0] * x[0]).unwrap();
        let trace = trace_of(&[Vector::zeros(1)]);
        assert!(matches!(
            evaluate_trace(&trace, &gradless),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn best_iterate_is_the_projection_argmin() {
        let f = make_benchmark("quadratic", 2, &BenchmarkParams::default()).unwrap();
        let trace = trace_of(&[
            Vector::new(vec![3.0, 4.0]).unwrap(),
            Vector::new(vec![0.1, 0.0]).unwrap(),
            Vector::new(vec![1.0, 1.0]).unwrap(),
        ]);
        match select_best(&trace, &f).unwrap() {
            BestIterate::ByProjection { iter, projection, point } => {
                assert_eq!(iter, 2);
                assert_relative_eq!(projection, 0.1, max_relative = 1e-14);
                assert_eq!(point.as_slice(), &[0.1, 0.0]);
            }
            other => panic!("expected a scored best iterate, got {other:?}"),
        }
        let empty = RunTrace { steps: vec![], total_queries: 0 };
        assert!(select_best(&empty, &f).is_err());
    }

    #[test]
    fn best_iterate_falls_back_to_the_last_point() {
        let gradless = Objective::new("gradless", 1, 1.0, |x: &Vector| x[0] * x[0]).unwrap();
        let trace = trace_of(&[
            Vector::new(vec![2.0]).unwrap(),
            Vector::new(vec![0.5]).unwrap(),
        ]);
        match select_best(&trace, &gradless).unwrap() {
            BestIterate::LastIterate { iter, point } => {
                assert_eq!(iter, 2);
                assert_eq!(point.as_slice(), &[0.5]);
            }
            other => panic!("expected the last-iterate fallback, got {other:?}"),
        }
    }

    #[test]
    fn hypothesis_audit_applies_the_prefix_rule() {
        // 1-D quadratic ½x²: gradient x, projection |x| toward 0.
        let f = make_benchmark("quadratic", 1, &BenchmarkParams::default()).unwrap();
        let trace = trace_of(&[
            Vector::new(vec![2.0]).unwrap(),
            Vector::new(vec![0.5]).unwrap(),
            Vector::new(vec![3.5]).unwrap(),
        ]);
        // Target 0.6 is first met at iterate 2, so only iterate 1 must
        // clear the gradient floor — the late small-gradient point at
        // iterate 2 (norm 0.5) is exempt.
        let report = check_hypotheses(&trace, &f, 3.0, Some(1.0), Some(0.6)).unwrap();
        assert_eq!(report.first_target_hit, Some(2));
        assert_eq!(report.min_prefix_gradient_norm, Some(2.0));
        assert_eq!(report.gradient_floor_holds, Some(true));
        assert_eq!(report.max_distance, 3.5);
        assert!(!report.distance_within_bound);
        // Without a target the whole trace is the prefix and 0.5 < 1.
        let report = check_hypotheses(&trace, &f, 4.0, Some(1.0), None).unwrap();
        assert_eq!(report.min_prefix_gradient_norm, Some(0.5));
        assert_eq!(report.gradient_floor_holds, Some(false));
        assert!(report.distance_within_bound);
        // A target met immediately leaves an empty prefix: vacuously sound.
        let report = check_hypotheses(&trace, &f, 4.0, Some(10.0), Some(2.5)).unwrap();
        assert_eq!(report.first_target_hit, Some(1));
        assert_eq!(report.min_prefix_gradient_norm, None);
        assert_eq!(report.gradient_floor_holds, Some(true));
        // No floor requested: nothing to audit beyond distances.
        let report = check_hypotheses(&trace, &f, 4.0, None, None).unwrap();
        assert_eq!(report.gradient_floor_holds, None);
        let empty = RunTrace { steps: vec![], total_queries: 0 };
        assert!(check_hypotheses(&empty, &f, 1.0, None, None).is_err());
    }
}
