//! Objective functions with optional verification metadata.
//!
//! The optimizer itself only ever *compares* objective values through the
//! oracle in [`crate::oracle`]; the analytic gradient and the minimizer stored
//! here exist so the harness and the test suite can measure convergence and
//! verify guarantees. They are never consulted by the algorithms under test.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vector::Vector;

type EvalFn = dyn Fn(&Vector) -> f64 + Send + Sync;
type GradFn = dyn Fn(&Vector) -> Vector + Send + Sync;

/// A deterministic real-valued objective on ℝⁿ together with the smoothness
/// constant the algorithms rely on and optional verification metadata.
///
/// Cloning is cheap (closures are shared via `Arc`), and the type is
/// immutable after construction, so one objective can back many oracles and
/// threads at once.
#[derive(Clone)]
pub struct Objective {
    name: String,
    dim: usize,
    smoothness: f64,
    eval: Arc<EvalFn>,
    grad: Option<Arc<GradFn>>,
    minimizer: Option<Vector>,
}

impl Objective {
    /// Builds an objective from an evaluation closure.
    ///
    /// `smoothness` must be a finite upper bound on the gradient's Lipschitz
    /// constant; the comparison-based tests are only sound when it is not an
    /// underestimate.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        smoothness: f64,
        eval: impl Fn(&Vector) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "objective dimension must be at least 1".into(),
            ));
        }
        if !(smoothness.is_finite() && smoothness > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "smoothness constant must be positive and finite, got {smoothness}"
            )));
        }
        Ok(Self {
            name: name.into(),
            dim,
            smoothness,
            eval: Arc::new(eval),
            grad: None,
            minimizer: None,
        })
    }

    /// Attaches an analytic gradient (verification metadata).
    pub fn with_grad(mut self, grad: impl Fn(&Vector) -> Vector + Send + Sync + 'static) -> Self {
        self.grad = Some(Arc::new(grad));
        self
    }

    /// Attaches the known minimizer (verification metadata).
    pub fn with_minimizer(mut self, minimizer: Vector) -> Result<Self> {
        if minimizer.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: minimizer.dim(),
            });
        }
        self.minimizer = Some(minimizer);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The stored Lipschitz constant of the gradient (an upper bound).
    pub fn smoothness(&self) -> f64 {
        self.smoothness
    }

    /// Evaluates the objective. Deterministic: equal inputs give equal bits.
    ///
    /// # Panics
    /// Panics if `x` has the wrong dimension; the oracle boundary validates
    /// dimensions and reports an error instead.
    pub fn eval(&self, x: &Vector) -> f64 {
        assert_eq!(x.dim(), self.dim, "objective evaluated at wrong dimension");
        (self.eval)(x)
    }

    /// Analytic gradient at `x`, when available.
    pub fn grad(&self, x: &Vector) -> Option<Vector> {
        assert_eq!(x.dim(), self.dim, "gradient evaluated at wrong dimension");
        self.grad.as_ref().map(|g| g(x))
    }

    pub fn has_grad(&self) -> bool {
        self.grad.is_some()
    }

    pub fn minimizer(&self) -> Option<&Vector> {
        self.minimizer.as_ref()
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("smoothness", &self.smoothness)
            .field("has_grad", &self.grad.is_some())
            .field("minimizer", &self.minimizer)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_square() -> Objective {
        Objective::new("half_square", 2, 1.0, |x| 0.5 * (x[0] * x[0] + x[1] * x[1]))
            .unwrap()
            .with_grad(|x| x.clone())
            .with_minimizer(Vector::zeros(2))
            .unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(Objective::new("bad", 0, 1.0, |_| 0.0).is_err());
        assert!(Objective::new("bad", 2, 0.0, |_| 0.0).is_err());
        assert!(Objective::new("bad", 2, f64::NAN, |_| 0.0).is_err());
        let wrong_dim = Objective::new("f", 2, 1.0, |_| 0.0)
            .unwrap()
            .with_minimizer(Vector::zeros(3));
        assert!(matches!(
            wrong_dim,
            Err(Error::DimensionMismatch { expected: 2, actual: 3 })
        ));
    }

    #[test]
    fn eval_and_metadata() {
        let f = half_square();
        let x = Vector::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(f.eval(&x), 12.5);
        assert_eq!(f.grad(&x).unwrap(), x);
        assert_eq!(f.minimizer().unwrap(), &Vector::zeros(2));
        assert_eq!(f.smoothness(), 1.0);
        assert!(f.has_grad());
    }

    #[test]
    fn eval_is_deterministic() {
        let f = half_square();
        let x = Vector::new(vec![0.1, -0.7]).unwrap();
        assert_eq!(f.eval(&x).to_bits(), f.eval(&x).to_bits());
    }

    #[test]
    fn clones_share_closures() {
        let f = half_square();
        let g = f.clone();
        let x = Vector::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(f.eval(&x).to_bits(), g.eval(&x).to_bits());
    }
}
