//! The two-point comparison oracle.
//!
//! This is the *only* gateway through which the optimization algorithms may
//! touch an objective: a call reveals which of two points has the larger
//! value — one bit — and nothing else. The oracle counts calls exactly, so
//! query-complexity claims can be checked against a ledger rather than
//! trusted.

use std::fmt;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::vector::Vector;

/// Outcome of a comparison: `Plus` means f(x) ≥ f(y), `Minus` means
/// f(x) ≤ f(y). Exact ties satisfy both; the oracle then returns its
/// configured tie value, so either answer remains a true assertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// The conventional numeric encoding, +1 or −1.
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// A comparison oracle over one objective, with an exact query ledger.
///
/// The counter increments by exactly one per successful [`compare`] call;
/// calls rejected during validation (wrong dimension, non-finite input) are
/// not counted. Function *values* never cross this boundary.
///
/// [`compare`]: CountingOracle::compare
pub struct CountingOracle {
    objective: Objective,
    queries: u64,
    tie_value: Sign,
}

impl CountingOracle {
    /// An oracle with the default tie value `Plus`.
    pub fn new(objective: Objective) -> Self {
        Self::with_tie_value(objective, Sign::Plus)
    }

    /// An oracle returning `tie_value` whenever f(x) = f(y) exactly.
    pub fn with_tie_value(objective: Objective, tie_value: Sign) -> Self {
        Self {
            objective,
            queries: 0,
            tie_value,
        }
    }

    /// Compares f(x) against f(y), returning only the sign.
    pub fn compare(&mut self, x: &Vector, y: &Vector) -> Result<Sign> {
        let dim = self.objective.dim();
        for p in [x, y] {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: p.dim(),
                });
            }
            if !p.is_finite() {
                return Err(Error::InvalidArgument(
                    "comparison points must be finite".into(),
                ));
            }
        }
        self.queries += 1;
        let fx = self.objective.eval(x);
        let fy = self.objective.eval(y);
        Ok(if fx > fy {
            Sign::Plus
        } else if fx < fy {
            Sign::Minus
        } else {
            self.tie_value
        })
    }

    /// Queries answered since construction or the last [`reset_count`].
    ///
    /// [`reset_count`]: CountingOracle::reset_count
    pub fn query_count(&self) -> u64 {
        self.queries
    }

    /// Resets the ledger to zero.
    pub fn reset_count(&mut self) {
        self.queries = 0;
    }

    /// The objective behind the oracle (for verification metadata; the
    /// algorithms under test never evaluate it directly).
    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn tie_value(&self) -> Sign {
        self.tie_value
    }
}

impl fmt::Debug for CountingOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CountingOracle")
            .field("objective", &self.objective.name())
            .field("queries", &self.queries)
            .field("tie_value", &self.tie_value)
            .finish()
    }
}
