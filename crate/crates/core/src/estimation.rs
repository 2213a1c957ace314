//! Gradient *direction* estimation from pairwise comparisons.
//!
//! The building block is the directional preference test
//! ([`directional_preference`]): comparing f at `x` against f at the short
//! probe `x + (2Δ/L)·v` yields, for an L-smooth objective, a certified
//! one-sided bound on the directional derivative ⟨∇f(x), v⟩ — at the price of
//! a single comparison query.
//!
//! [`estimate_direction`] composes these tests into a full estimate of the
//! normalized gradient: one sign test per coordinate, a sequential tournament
//! that finds a coordinate of near-maximal magnitude, and a per-coordinate
//! binary search for the magnitude ratios against that pivot. When the
//! gradient norm at `x` is at least `gamma`, the estimate lands within
//! `delta` of ∇f(x)/‖∇f(x)‖ in Euclidean distance, using a number of queries
//! given *exactly* by [`query_budget`].

use crate::error::{Error, Result};
use crate::numeric::{ceil_tolerant, dim_pow_3_2};
use crate::oracle::{CountingOracle, Sign};
use crate::vector::Vector;

/// Tolerance for the unit-norm precondition on probe directions.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// The assertion certified by one directional preference test with slack Δ
/// on a unit direction `v`: which side of `[−Δ, Δ]` the directional
/// derivative ⟨∇f(x), v⟩ is guaranteed *not* to be below / above.
///
/// Both answers are legitimate when the derivative lies inside `[−Δ, Δ]`;
/// whichever is returned, the certified inequality is true.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpAnswer {
    /// Certifies ⟨∇f(x), v⟩ ≥ −Δ.
    GeqMinusDelta,
    /// Certifies ⟨∇f(x), v⟩ ≤ Δ.
    LeqDelta,
}

/// One comparison-query test of the directional derivative at `x` along the
/// unit vector `v`, with additive slack `slack` (the Δ above).
///
/// `smoothness` must upper-bound the objective's gradient Lipschitz
/// constant; overestimates keep the certificate sound (the probe merely gets
/// shorter), underestimates void it.
///
/// # Errors
/// Rejects non-positive or non-finite `smoothness`/`slack`, a `v` that is
/// not unit-norm within [`UNIT_NORM_TOL`], and dimension mismatches.
pub fn directional_preference(
    oracle: &mut CountingOracle,
    smoothness: f64,
    x: &Vector,
    v: &Vector,
    slack: f64,
) -> Result<DpAnswer> {
    if !(smoothness.is_finite() && smoothness > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "smoothness must be positive and finite, got {smoothness}"
        )));
    }
    if !(slack.is_finite() && slack > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "slack must be positive and finite, got {slack}"
        )));
    }
    if v.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: v.dim(),
        });
    }
    if (v.norm() - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::InvalidArgument(format!(
            "direction must be unit norm (got ||v|| = {})",
            v.norm()
        )));
    }
    let probe = x.add_scaled(2.0 * slack / smoothness, v);
    match oracle.compare(&probe, x)? {
        Sign::Plus => Ok(DpAnswer::GeqMinusDelta),
        Sign::Minus => Ok(DpAnswer::LeqDelta),
    }
}

/// Number of bisection iterations each non-pivot coordinate receives:
/// ⌈log₂(4·dim^{3/2}/delta) + 1⌉. Requires `dim ≥ 2` and `delta ∈ (0, 1]`.
pub fn binary_search_iters(dim: usize, delta: f64) -> Result<u64> {
    if dim < 2 {
        return Err(Error::InvalidArgument(
            "binary search iterations are defined for dim >= 2".into(),
        ));
    }
    check_delta(delta)?;
    let ratio = 4.0 * dim_pow_3_2(dim) / delta;
    Ok(ceil_tolerant(ratio.log2() + 1.0) as u64)
}

/// Exact number of comparison queries one [`estimate_direction`] call spends:
/// `dim` sign tests + `dim − 1` tournament rounds + `(dim − 1)` binary
/// searches of [`binary_search_iters`] iterations each; a single query when
/// `dim == 1`. Deterministic, and independent of the gradient floor `gamma`
/// (the bisection count depends only on `dim` and `delta`).
pub fn query_budget(dim: usize, delta: f64) -> Result<u64> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    check_delta(delta)?;
    if dim == 1 {
        return Ok(1);
    }
    let d = dim as u64;
    Ok(d + (d - 1) + (d - 1) * binary_search_iters(dim, delta)?)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    Ok(())
}

/// A unit-norm gradient-direction estimate plus the diagnostics the
/// verification suite inspects.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionEstimate {
    /// The estimate of ∇f(x)/‖∇f(x)‖; unit Euclidean norm within 1e-12.
    pub direction: Vector,
    /// Comparison queries consumed by this estimate; always equals
    /// [`query_budget`] of the inputs.
    pub queries_used: u64,
    /// Outcome of the per-coordinate sign tests, ±1 each.
    pub sign_pattern: Vec<i8>,
    /// Coordinate selected by the tournament as (near-)dominant.
    pub pivot_index: usize,
    /// Final magnitude ratio per coordinate relative to the pivot, each in
    /// [0, 1]; the pivot's entry is 1.
    pub alphas: Vec<f64>,
    /// Final bisection bracket per coordinate (`[1, 1]` for the pivot); the
    /// upper end still at 1.0 means no test ever capped that coordinate.
    pub brackets: Vec<[f64; 2]>,
}

/// Estimates the normalized gradient of the oracle's objective at `x` using
/// comparisons only.
///
/// Guarantee: if the objective is `smoothness`-smooth and
/// `‖∇f(x)‖ ≥ gamma > 0`, the returned direction is within `delta` of
/// ∇f(x)/‖∇f(x)‖. Below the floor the call still completes and spends the
/// same budget, but the direction carries no accuracy claim.
///
/// # Errors
/// Rejects `delta` outside (0, 1], non-positive `gamma` or `smoothness`,
/// and points of the wrong dimension.
pub fn estimate_direction(
    oracle: &mut CountingOracle,
    smoothness: f64,
    x: &Vector,
    delta: f64,
    gamma: f64,
) -> Result<DirectionEstimate> {
    check_delta(delta)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be positive and finite, got {gamma}"
        )));
    }
    let n = oracle.objective().dim();
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: x.dim(),
        });
    }
    let start = oracle.query_count();
    let slack = delta * gamma / (4.0 * dim_pow_3_2(n));

    // Per-coordinate sign tests: +1 certifies ∂ᵢf(x) ≥ −Δ, −1 certifies
    // ∂ᵢf(x) ≤ Δ. All later probes use the sign-adjusted axes sᵢ·eᵢ, whose
    // adjusted derivatives are ≥ −Δ.
    let mut signs = vec![1i8; n];
    for (i, s) in signs.iter_mut().enumerate() {
        let e = Vector::basis(n, i);
        *s = match directional_preference(oracle, smoothness, x, &e, slack)? {
            DpAnswer::GeqMinusDelta => 1,
            DpAnswer::LeqDelta => -1,
        };
    }

    if n == 1 {
        return Ok(DirectionEstimate {
            direction: Vector::new(vec![signs[0] as f64]).expect("±1 is finite"),
            queries_used: oracle.query_count() - start,
            sign_pattern: signs,
            pivot_index: 0,
            alphas: vec![1.0],
            brackets: vec![[1.0, 1.0]],
        });
    }

    // Sequential tournament for a dominant coordinate: testing the contrast
    // direction (s_c·e_c − s_j·e_j)/√2, the champion survives unless the
    // test certifies the challenger's adjusted derivative is at least as
    // large up to √2·Δ.
    let mut pivot = 0usize;
    for j in 1..n {
        let v = contrast_direction(n, pivot, signs[pivot], j, signs[j], 1.0);
        if directional_preference(oracle, smoothness, x, &v, slack)? == DpAnswer::LeqDelta {
            pivot = j;
        }
    }

    // Per-coordinate bisection of the magnitude ratio α against the pivot,
    // probing (α·s_p·e_p − s_i·e_i)/√(1+α²): `GeqMinusDelta` certifies
    // α·g_p ≥ g_i − √2·Δ (α already large enough → becomes the upper end),
    // `LeqDelta` the reverse. A fixed iteration count keeps the query
    // ledger deterministic.
    let iters = binary_search_iters(n, delta).expect("delta validated above");
    let mut alphas = vec![1.0f64; n];
    let mut brackets = vec![[1.0, 1.0]; n];
    for i in 0..n {
        if i == pivot {
            continue;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..iters {
            let mid = 0.5 * (lo + hi);
            let v = contrast_direction(n, pivot, signs[pivot], i, signs[i], mid);
            match directional_preference(oracle, smoothness, x, &v, slack)? {
                DpAnswer::GeqMinusDelta => hi = mid,
                DpAnswer::LeqDelta => lo = mid,
            }
        }
        alphas[i] = 0.5 * (lo + hi);
        brackets[i] = [lo, hi];
    }

    // Assemble signs ⊙ α and normalize; the pivot contributes 1, so the norm
    // is at least 1 and division is safe.
    let norm = alphas.iter().map(|a| a * a).sum::<f64>().sqrt();
    let coords: Vec<f64> = alphas
        .iter()
        .zip(&signs)
        .map(|(a, s)| f64::from(*s) * a / norm)
        .collect();
    let queries_used = oracle.query_count() - start;
    debug_assert_eq!(queries_used, query_budget(n, delta).expect("validated"));
    Ok(DirectionEstimate {
        direction: Vector::new(coords).expect("normalized coordinates are finite"),
        queries_used,
        sign_pattern: signs,
        pivot_index: pivot,
        alphas,
        brackets,
    })
}

/// The unit vector `(α·s_a·e_a − s_b·e_b)/√(1+α²)` used by the tournament
/// (α = 1) and the bisection probes.
fn contrast_direction(n: usize, a: usize, sign_a: i8, b: usize, sign_b: i8, alpha: f64) -> Vector {
    let scale = 1.0 / (1.0 + alpha * alpha).sqrt();
    let mut v = vec![0.0; n];
    v[a] = alpha * f64::from(sign_a) * scale;
    v[b] = -f64::from(sign_b) * scale;
    Vector::new(v).expect("contrast coordinates are finite")
}
