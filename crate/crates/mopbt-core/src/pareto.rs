use alloc::vec::Vec;

use crate::dominance::dominates_values;
use crate::{CoreError, ObjectiveVector, Result};

/// Keeps exactly the points not dominated by any other point.
///
/// Duplicate copies of a non-dominated point collapse to one (the first
/// occurrence); output preserves input order otherwise.
pub fn pareto_filter(points: &[ObjectiveVector]) -> Result<Vec<ObjectiveVector>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let k = points[0].len();
    for p in points {
        if p.len() != k {
            return Err(CoreError::LengthMismatch { expected: k, actual: p.len() });
        }
    }
    let mut kept: Vec<ObjectiveVector> = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if dominates_values(q.values(), p.values()) {
                continue 'outer;
            }
            // Exact duplicate: keep only the first occurrence.
            if j < i && q.values() == p.values() {
                continue 'outer;
            }
        }
        kept.push(p.clone());
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ovs(points: &[&[f64]]) -> Vec<ObjectiveVector> {
        points
            .iter()
            .map(|p| ObjectiveVector::new(p.to_vec()).unwrap())
            .collect()
    }

    #[test]
    fn dominated_interior_point_is_removed() {
        let filtered = pareto_filter(&ovs(&[&[1.0, 0.5], &[0.0, 1.0], &[0.4, 0.4]])).unwrap();
        assert_eq!(filtered, ovs(&[&[1.0, 0.5], &[0.0, 1.0]]));
    }

    #[test]
    fn incomparable_interior_point_survives() {
        // (0.4, 0.4) is worse than each axis point in one coordinate but
        // better in the other, so no point dominates it.
        let filtered = pareto_filter(&ovs(&[&[1.0, 0.0], &[0.0, 1.0], &[0.4, 0.4]])).unwrap();
        assert_eq!(filtered, ovs(&[&[1.0, 0.0], &[0.0, 1.0], &[0.4, 0.4]]));
    }

    #[test]
    fn single_point_survives() {
        let filtered = pareto_filter(&ovs(&[&[0.3, 0.3]])).unwrap();
        assert_eq!(filtered, ovs(&[&[0.3, 0.3]]));
    }

    #[test]
    fn duplicates_collapse_to_one() {
        let filtered =
            pareto_filter(&ovs(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(filtered, ovs(&[&[1.0, 0.0], &[0.0, 1.0]]));
    }

    #[test]
    fn empty_input_yields_empty_front() {
        assert_eq!(pareto_filter(&[]).unwrap(), Vec::<ObjectiveVector>::new());
    }
}
