use crate::{ConstraintStatus, CoreError, ObjectiveVector, Result};

/// Pareto domination for maximization.
///
/// `a` dominates `b` when it is at least as good in every objective and
/// strictly better in at least one. The relation is irreflexive: a point
/// never dominates an identical copy of itself.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    if a.len() != b.len() {
        return Err(CoreError::LengthMismatch { expected: a.len(), actual: b.len() });
    }
    Ok(dominates_values(a.values(), b.values()))
}

/// Domination over raw slices; callers guarantee equal lengths and finiteness.
pub(crate) fn dominates_values(a: &[f64], b: &[f64]) -> bool {
    let mut any_better = false;
    for (&x, &y) in a.iter().zip(b.iter()) {
        if x < y {
            return false;
        }
        if x > y {
            any_better = true;
        }
    }
    any_better
}

/// Constraint domination: feasibility first, objectives second.
///
/// A feasible point dominates any infeasible one. Two infeasible points are
/// ordered by violation magnitude (strictly smaller wins). Two feasible
/// points fall back to plain Pareto domination.
pub fn constraint_dominates(
    a: &ObjectiveVector,
    ca: &ConstraintStatus,
    b: &ObjectiveVector,
    cb: &ConstraintStatus,
) -> Result<bool> {
    if a.len() != b.len() {
        return Err(CoreError::LengthMismatch { expected: a.len(), actual: b.len() });
    }
    Ok(constraint_dominates_values(a.values(), ca, b.values(), cb))
}

pub(crate) fn constraint_dominates_values(
    a: &[f64],
    ca: &ConstraintStatus,
    b: &[f64],
    cb: &ConstraintStatus,
) -> bool {
    match (ca.is_feasible(), cb.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => ca.violation() < cb.violation(),
        (true, true) => dominates_values(a, b),
    }
}
