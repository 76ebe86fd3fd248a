use alloc::vec::Vec;

use crate::{CoreError, Result};

/// A vector of objective values, all maximized.
///
/// Construction validates that every entry is finite, so the algorithms in
/// this crate never have to reason about NaN orderings.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector {
    values: Vec<f64>,
}

impl ObjectiveVector {
    /// Builds a vector after checking that it is nonempty and finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(CoreError::EmptyInput);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFiniteValue);
        }
        Ok(Self { values })
    }

    /// Number of objectives.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the vector holds no objectives (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Objective values as a slice.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Feasibility of a solution under an optional task constraint.
///
/// `violation` is zero exactly when the point is feasible; infeasible
/// points carry a positive magnitude used to order them among themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintStatus {
    feasible: bool,
    violation: f64,
}

impl ConstraintStatus {
    /// A feasible point (violation zero).
    pub fn feasible() -> Self {
        Self { feasible: true, violation: 0.0 }
    }

    /// An infeasible point with a positive, finite violation magnitude.
    pub fn infeasible(violation: f64) -> Result<Self> {
        if !violation.is_finite() && violation != f64::INFINITY {
            return Err(CoreError::NonFiniteValue);
        }
        if violation <= 0.0 {
            return Err(CoreError::InconsistentConstraint);
        }
        Ok(Self { feasible: false, violation })
    }

    /// Builds a status from a raw violation magnitude (zero means feasible).
    pub fn from_violation(violation: f64) -> Result<Self> {
        if violation == 0.0 {
            Ok(Self::feasible())
        } else {
            Self::infeasible(violation)
        }
    }

    /// Whether the point satisfies the constraint.
    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    /// Violation magnitude; zero iff feasible.
    pub fn violation(&self) -> f64 {
        self.violation
    }
}
