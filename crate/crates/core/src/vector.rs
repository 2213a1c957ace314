//! Dense real coordinate vectors.
//!
//! A deliberately small fixed-size-free vector type: the optimizer only ever
//! needs norms, dot products and axpy-style updates in low dimension, so a
//! thin wrapper over `Vec<f64>` beats pulling in a linear-algebra crate.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// A dense real coordinate vector with at least one coordinate.
///
/// Checked constructors ([`Vector::new`], [`Vector::from_slice`]) reject empty
/// or non-finite data. Arithmetic helpers do not re-validate; code that can
/// overflow (e.g. a diverging descent iterate) checks [`Vector::is_finite`]
/// after the fact.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Builds a vector, rejecting empty or non-finite input.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidArgument(
                "vector must have at least one coordinate".into(),
            ));
        }
        if let Some(bad) = data.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "vector coordinates must be finite, got {bad}"
            )));
        }
        Ok(Self(data))
    }

    /// Builds a vector from a slice, with the same checks as [`Vector::new`].
    pub fn from_slice(data: &[f64]) -> Result<Self> {
        Self::new(data.to_vec())
    }

    /// The all-zeros vector in `dim` dimensions.
    ///
    /// # Panics
    /// Panics if `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vectors must have at least one coordinate");
        Self(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector in `dim` dimensions.
    ///
    /// # Panics
    /// Panics if `dim == 0` or `i >= dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.0[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// Euclidean norm. This crate fixes the Euclidean norm everywhere (it is
    /// self-dual, which is what makes normalized descent steps meaningful).
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Dot product.
    ///
    /// # Panics
    /// Panics on dimension mismatch; callers on the public API boundary
    /// validate dimensions first and report [`Error::DimensionMismatch`].
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dot product dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// `self + t * dir`, as a new vector.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn add_scaled(&self, t: f64, dir: &Self) -> Self {
        assert_eq!(self.dim(), dir.dim(), "add_scaled dimension mismatch");
        Self(
            self.0
                .iter()
                .zip(&dir.0)
                .map(|(a, b)| a + t * b)
                .collect(),
        )
    }

    /// `self - other`, as a new vector.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(-1.0, other)
    }

    /// `t * self`, as a new vector.
    pub fn scaled(&self, t: f64) -> Self {
        Self(self.0.iter().map(|a| t * a).collect())
    }

    /// `self / ||self||`, or `None` when the norm is zero.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self.scaled(1.0 / n))
        }
    }

    /// Euclidean distance to `other`.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    /// True when every coordinate is finite (no NaN or infinity).
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
