//! Built-in benchmark objectives and the name-addressable registry.
//!
//! Every builtin is smooth and *strictly quasi-convex*: sublevel sets are
//! convex and the gradient vanishes only at the unique minimizer. Two of the
//! three are deliberately non-convex (`log_quadratic`, `exp_bump`) so the
//! suite exercises exactly the function class the comparison-based machinery
//! is designed for, not just the convex corner of it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::vector::Vector;

/// Safety factor applied to numerically certified smoothness constants.
/// A certified constant is a measurement, not a proof; storing a 10% margin
/// keeps the directional tests sound against certification error.
pub const SMOOTHNESS_SAFETY: f64 = 1.1;

/// Certified Lipschitz constant of the `log_quadratic` gradient (supremum of
/// the Hessian operator norm, attained at the center). The certification
/// sweep lives in this module's tests and must reproduce this value.
pub const LOG_QUADRATIC_BASE_SMOOTHNESS: f64 = 2.0;

/// Certified Lipschitz constant of the `exp_bump` gradient (supremum of the
/// Hessian operator norm, attained at the center); certified in the tests.
pub const EXP_BUMP_BASE_SMOOTHNESS: f64 = 2.0;

/// Optional construction parameters shared by all benchmark families.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchmarkParams {
    /// Minimizer location; defaults to the origin.
    pub center: Option<Vec<f64>>,
    /// Per-coordinate curvatures; only the `quadratic` family accepts this.
    pub spectrum: Option<Vec<f64>>,
}

impl BenchmarkParams {
    fn resolved_center(&self, dim: usize) -> Result<Vector> {
        match &self.center {
            None => Ok(Vector::zeros(dim)),
            Some(c) => {
                if c.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: c.len(),
                    });
                }
                Vector::from_slice(c)
            }
        }
    }

    fn reject_spectrum(&self, family: &str) -> Result<()> {
        if self.spectrum.is_some() {
            return Err(Error::InvalidArgument(format!(
                "spectrum: only the quadratic benchmark accepts a spectrum (got one for `{family}`)"
            )));
        }
        Ok(())
    }
}

/// A named family of benchmark objectives, instantiated per dimension.
pub trait BenchmarkFamily: Send + Sync {
    /// Registry key, e.g. `"quadratic"`.
    fn name(&self) -> &'static str;

    /// Builds the objective in `dim` dimensions.
    fn build(&self, dim: usize, params: &BenchmarkParams) -> Result<Objective>;
}

/// `f(x) = ½ Σ aᵢ (xᵢ − cᵢ)²` with a strictly positive spectrum `a`.
/// Smoothness constant `max aᵢ` (exact); the only convex builtin.
struct Quadratic;

impl BenchmarkFamily for Quadratic {
    fn name(&self) -> &'static str {
        "quadratic"
    }

    fn build(&self, dim: usize, params: &BenchmarkParams) -> Result<Objective> {
        let center = params.resolved_center(dim)?;
        let spectrum = match &params.spectrum {
            None => vec![1.0; dim],
            Some(a) => {
                if a.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: a.len(),
                    });
                }
                if let Some(bad) = a.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                    return Err(Error::InvalidArgument(format!(
                        "spectrum: entries must be positive and finite, got {bad}"
                    )));
                }
                a.clone()
            }
        };
        let smoothness = spectrum.iter().cloned().fold(f64::MIN, f64::max);
        let (c_eval, a_eval) = (center.clone(), spectrum.clone());
        let (c_grad, a_grad) = (center.clone(), spectrum);
        Objective::new("quadratic", dim, smoothness, move |x| {
            x.iter()
                .zip(c_eval.iter())
                .zip(&a_eval)
                .map(|((xi, ci), ai)| 0.5 * ai * (xi - ci) * (xi - ci))
                .sum()
        })?
        .with_grad(move |x| {
            let g: Vec<f64> = x
                .iter()
                .zip(c_grad.iter())
                .zip(&a_grad)
                .map(|((xi, ci), ai)| ai * (xi - ci))
                .collect();
            Vector::new(g).expect("gradient of a finite point is finite")
        })
        .with_minimizer(center)
    }
}

/// `f(x) = log(1 + ‖x − c‖²)`: strictly quasi-convex but not convex (the
/// Hessian's radial eigenvalue turns negative past ‖x − c‖ = 1).
struct LogQuadratic;

impl BenchmarkFamily for LogQuadratic {
    fn name(&self) -> &'static str {
        "log_quadratic"
    }

    fn build(&self, dim: usize, params: &BenchmarkParams) -> Result<Objective> {
        params.reject_spectrum(self.name())?;
        let center = params.resolved_center(dim)?;
        let c_eval = center.clone();
        let c_grad = center.clone();
        let smoothness = SMOOTHNESS_SAFETY * LOG_QUADRATIC_BASE_SMOOTHNESS;
        Objective::new("log_quadratic", dim, smoothness, move |x| {
            let r2 = x.distance(&c_eval).powi(2);
            (1.0 + r2).ln()
        })?
        .with_grad(move |x| {
            let d = x.sub(&c_grad);
            let r2 = d.norm().powi(2);
            d.scaled(2.0 / (1.0 + r2))
        })
        .with_minimizer(center)
    }
}

/// `f(x) = 1 − exp(−‖x − c‖²)`: a smooth bump flipped upside down; strictly
/// quasi-convex, bounded, and flat far from the center.
struct ExpBump;

impl BenchmarkFamily for ExpBump {
    fn name(&self) -> &'static str {
        "exp_bump"
    }

    fn build(&self, dim: usize, params: &BenchmarkParams) -> Result<Objective> {
        params.reject_spectrum(self.name())?;
        let center = params.resolved_center(dim)?;
        let c_eval = center.clone();
        let c_grad = center.clone();
        let smoothness = SMOOTHNESS_SAFETY * EXP_BUMP_BASE_SMOOTHNESS;
        Objective::new("exp_bump", dim, smoothness, move |x| {
            let r2 = x.distance(&c_eval).powi(2);
            1.0 - (-r2).exp()
        })?
        .with_grad(move |x| {
            let d = x.sub(&c_grad);
            let r2 = d.norm().powi(2);
            d.scaled(2.0 * (-r2).exp())
        })
        .with_minimizer(center)
    }
}

/// Name → family registry. Families are boxed trait objects so downstream
/// code (or tests) can register additional objectives next to the builtins.
pub struct BenchmarkRegistry {
    families: BTreeMap<&'static str, Box<dyn BenchmarkFamily>>,
}

impl BenchmarkRegistry {
    /// An empty registry.
    pub fn new() -> Self {
        Self {
            families: BTreeMap::new(),
        }
    }

    /// The registry with `quadratic`, `log_quadratic` and `exp_bump`.
    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register(Box::new(Quadratic));
        r.register(Box::new(LogQuadratic));
        r.register(Box::new(ExpBump));
        r
    }

    /// Registers a family under its own name, replacing any previous entry.
    pub fn register(&mut self, family: Box<dyn BenchmarkFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Option<&dyn BenchmarkFamily> {
        self.families.get(name).map(|b| b.as_ref())
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }

    /// Builds `name` in `dim` dimensions, or reports the known names.
    pub fn build(&self, name: &str, dim: usize, params: &BenchmarkParams) -> Result<Objective> {
        match self.get(name) {
            Some(f) => f.build(dim, params),
            None => Err(Error::UnknownBenchmark {
                name: name.to_string(),
                known: self.names().join(", "),
            }),
        }
    }
}

impl Default for BenchmarkRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

/// Convenience: builds a builtin benchmark by name.
pub fn make_benchmark(name: &str, dim: usize, params: &BenchmarkParams) -> Result<Objective> {
    BenchmarkRegistry::with_builtins().build(name, dim, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{fd_gradient, sample_in_ball, seeded_rng};
    use rand::Rng;

    fn params(center: Option<Vec<f64>>, spectrum: Option<Vec<f64>>) -> BenchmarkParams {
        BenchmarkParams { center, spectrum }
    }

    #[test]
    fn quadratic_values_and_gradient() {
        let f = make_benchmark("quadratic", 2, &params(None, Some(vec![1.0, 4.0]))).unwrap();
        let x = Vector::new(vec![2.0, 1.0]).unwrap();
        assert_eq!(f.eval(&x), 0.5 * (4.0 + 4.0));
        assert_eq!(f.grad(&x).unwrap().as_slice(), &[2.0, 4.0]);
        assert_eq!(f.smoothness(), 4.0);
        assert_eq!(f.minimizer().unwrap(), &Vector::zeros(2));
    }

    #[test]
    fn quadratic_with_unit_spectrum_is_half_squared_distance() {
        let f = make_benchmark("quadratic", 3, &params(Some(vec![1.0, 0.0, -1.0]), None)).unwrap();
        let x = Vector::new(vec![1.0, 2.0, -1.0]).unwrap();
        assert_eq!(f.eval(&x), 2.0);
        assert_eq!(f.smoothness(), 1.0);
    }

    #[test]
    fn quadratic_rejects_bad_spectrum() {
        assert!(make_benchmark("quadratic", 2, &params(None, Some(vec![1.0, 0.0]))).is_err());
        assert!(make_benchmark("quadratic", 2, &params(None, Some(vec![1.0, -3.0]))).is_err());
        assert!(make_benchmark("quadratic", 2, &params(None, Some(vec![1.0]))).is_err());
    }

    #[test]
    fn non_quadratic_families_reject_spectrum() {
        for name in ["log_quadratic", "exp_bump"] {
            let err = make_benchmark(name, 2, &params(None, Some(vec![1.0, 1.0])));
            assert!(err.is_err(), "{name} accepted a spectrum");
        }
    }

    #[test]
    fn log_quadratic_values() {
        let f = make_benchmark("log_quadratic", 2, &BenchmarkParams::default()).unwrap();
        assert_eq!(f.eval(&Vector::zeros(2)), 0.0);
        let x = Vector::new(vec![1.0, 1.0]).unwrap();
        assert!((f.eval(&x) - 3.0f64.ln()).abs() < 1e-15);
        assert_eq!(f.smoothness(), SMOOTHNESS_SAFETY * 2.0);
    }

    #[test]
    fn exp_bump_values() {
        let f = make_benchmark("exp_bump", 2, &BenchmarkParams::default()).unwrap();
        assert_eq!(f.eval(&Vector::zeros(2)), 0.0);
        let far = Vector::new(vec![30.0, 0.0]).unwrap();
        assert!((f.eval(&far) - 1.0).abs() < 1e-12);
        assert_eq!(f.smoothness(), SMOOTHNESS_SAFETY * 2.0);
    }

    #[test]
    fn unknown_name_lists_known_families() {
        let err = make_benchmark("cubic", 2, &BenchmarkParams::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cubic") && msg.contains("quadratic"), "{msg}");
    }

    #[test]
    fn registry_accepts_custom_families() {
        struct Affine;
        impl BenchmarkFamily for Affine {
            fn name(&self) -> &'static str {
                "affine"
            }
            fn build(&self, dim: usize, _: &BenchmarkParams) -> Result<Objective> {
                Objective::new("affine", dim, 1.0, |x| x[0])
            }
        }
        let mut reg = BenchmarkRegistry::with_builtins();
        reg.register(Box::new(Affine));
        assert!(reg.names().contains(&"affine"));
        assert!(reg.build("affine", 2, &BenchmarkParams::default()).is_ok());
    }

    /// Analytic gradients must match central finite differences with step
    /// h = 1e-6·(1 + ‖x‖) to a relative error of 1e-4 at sampled points.
    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = seeded_rng(401);
        for name in ["quadratic", "log_quadratic", "exp_bump"] {
            for dim in [1usize, 2, 5] {
                let center: Vec<f64> = (0..dim).map(|i| 0.3 * (i as f64) - 0.2).collect();
                let spectrum = (name == "quadratic")
                    .then(|| (0..dim).map(|i| 0.5 + 0.9 * i as f64).collect());
                let f = make_benchmark(name, dim, &params(Some(center), spectrum)).unwrap();
                for _ in 0..50 {
                    let x = sample_in_ball(&mut rng, dim, 3.0);
                    let g = f.grad(&x).unwrap();
                    let fd = fd_gradient(&f, &x);
                    let denom = g.norm().max(1e-6);
                    assert!(
                        g.sub(&fd).norm() / denom < 1e-4,
                        "{name} dim {dim}: grad {g} vs fd {fd} at {x}"
                    );
                }
            }
        }
    }

    /// Sampled quasi-convexity: whenever f(y) ≤ f(x), the gradient at x makes
    /// a non-increasing direction toward y, i.e. ⟨∇f(x), y − x⟩ ≤ 0.
    #[test]
    fn sampled_quasi_convexity() {
        let mut rng = seeded_rng(402);
        for name in ["quadratic", "log_quadratic", "exp_bump"] {
            let f = make_benchmark(name, 3, &BenchmarkParams::default()).unwrap();
            for _ in 0..500 {
                let x = sample_in_ball(&mut rng, 3, 4.0);
                let y = sample_in_ball(&mut rng, 3, 4.0);
                if f.eval(&y) <= f.eval(&x) {
                    let g = f.grad(&x).unwrap();
                    assert!(
                        g.dot(&y.sub(&x)) <= 1e-9,
                        "{name}: ascent direction toward a lower point at {x} / {y}"
                    );
                }
            }
        }
    }

    /// Strictness: the gradient vanishes only at the minimizer.
    #[test]
    fn gradient_vanishes_only_at_center() {
        let mut rng = seeded_rng(403);
        for name in ["quadratic", "log_quadratic", "exp_bump"] {
            let f = make_benchmark(name, 2, &BenchmarkParams::default()).unwrap();
            assert_eq!(f.grad(&Vector::zeros(2)).unwrap().norm(), 0.0);
            for _ in 0..200 {
                let x = sample_in_ball(&mut rng, 2, 4.0);
                if x.norm() > 1e-6 {
                    assert!(f.grad(&x).unwrap().norm() > 0.0, "{name}: flat at {x}");
                }
            }
        }
    }

    /// Sampled smoothness: ‖∇f(x) − ∇f(y)‖ ≤ L‖x − y‖ for the stored L.
    #[test]
    fn stored_smoothness_bounds_gradient_variation() {
        let mut rng = seeded_rng(404);
        for name in ["quadratic", "log_quadratic", "exp_bump"] {
            let f = make_benchmark(name, 3, &BenchmarkParams::default()).unwrap();
            for _ in 0..500 {
                let x = sample_in_ball(&mut rng, 3, 4.0);
                let scale: f64 = rng.random_range(1e-3..1.0);
                let y = x.add_scaled(scale, &sample_in_ball(&mut rng, 3, 1.0));
                let lhs = f.grad(&x).unwrap().sub(&f.grad(&y).unwrap()).norm();
                let rhs = f.smoothness() * x.distance(&y);
                assert!(lhs <= rhs + 1e-12, "{name}: ratio {}", lhs / rhs.max(1e-300));
            }
        }
    }

    /// Certification sweep for the non-quadratic smoothness constants: the
    /// max of ‖∇f(x) − ∇f(y)‖/‖x − y‖ over random pairs and of the 1-D
    /// Hessian eigenvalues over a radial grid must reproduce the stored base
    /// constants (both suprema are attained at the center and equal 2).
    #[test]
    fn certified_smoothness_constants() {
        let mut rng = seeded_rng(405);
        for (name, base) in [
            ("log_quadratic", LOG_QUADRATIC_BASE_SMOOTHNESS),
            ("exp_bump", EXP_BUMP_BASE_SMOOTHNESS),
        ] {
            let f = make_benchmark(name, 3, &BenchmarkParams::default()).unwrap();
            let mut certified: f64 = 0.0;
            // Dense random pairs, including very close ones.
            for _ in 0..4000 {
                let x = sample_in_ball(&mut rng, 3, 4.0);
                let h: f64 = rng.random_range(1e-5..0.5);
                let y = x.add_scaled(h, &sample_in_ball(&mut rng, 3, 1.0));
                let d = x.distance(&y);
                if d > 0.0 {
                    let ratio = f.grad(&x).unwrap().sub(&f.grad(&y).unwrap()).norm() / d;
                    certified = certified.max(ratio);
                }
            }
            // 1-D sweep along a ray: radial curvature via a second difference
            // of the profile φ(r) = f(r·u), tangential curvature via φ'(r)/r.
            let u = Vector::basis(3, 0);
            let profile = |r: f64| f.eval(&u.scaled(r));
            let fd = 1e-4;
            let mut r = 0.0;
            while r <= 4.0 {
                let radial = (profile(r + fd) - 2.0 * profile(r) + profile(r - fd)) / (fd * fd);
                certified = certified.max(radial.abs());
                if r > 1e-3 {
                    let tangential = (profile(r + fd) - profile(r - fd)) / (2.0 * fd * r);
                    certified = certified.max(tangential.abs());
                }
                r += 1e-3;
            }
            assert!(
                (certified - base).abs() < 1e-3,
                "{name}: certified {certified}, stored base {base}"
            );
            assert_eq!(f.smoothness(), SMOOTHNESS_SAFETY * base);
        }
    }

    /// The stored minimizer is a global minimum over sampled points.
    #[test]
    fn minimizer_is_minimal_on_samples() {
        let mut rng = seeded_rng(406);
        for name in ["quadratic", "log_quadratic", "exp_bump"] {
            let center = vec![0.5, -1.0];
            let f = make_benchmark(name, 2, &params(Some(center), None)).unwrap();
            let fmin = f.eval(f.minimizer().unwrap());
            for _ in 0..300 {
                let x = sample_in_ball(&mut rng, 2, 5.0);
                assert!(f.eval(&x) >= fmin, "{name}: point below stored minimum");
            }
        }
    }
}
