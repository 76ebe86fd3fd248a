use alloc::vec::Vec;

use crate::metrics::ReferencePoint;
use crate::{CoreError, ObjectiveVector, Result};

/// Exact hypervolume dominated by `points` with respect to `r`, maximizing.
///
/// Only points strictly better than `r` in every coordinate enclose a
/// nonempty box and are kept; the rest contribute nothing and are dropped.
/// Two objectives use a sort-and-sweep, three use a dimension sweep over
/// slices of the third coordinate. Higher objective counts are not
/// supported.
pub fn hypervolume(points: &[ObjectiveVector], r: &ReferencePoint) -> Result<f64> {
    let k = r.values().len();
    for p in points {
        if p.len() != k {
            return Err(CoreError::LengthMismatch { expected: k, actual: p.len() });
        }
    }
    let surviving: Vec<&[f64]> = points
        .iter()
        .map(ObjectiveVector::values)
        .filter(|p| p.iter().zip(r.values()).all(|(v, rv)| v > rv))
        .collect();
    match k {
        2 => Ok(hv2(&surviving, r.values())),
        3 => Ok(hv3(&surviving, r.values())),
        _ => Err(CoreError::UnsupportedObjectiveCount { objectives: k }),
    }
}

/// 2D sweep: walk the non-dominated staircase in ascending f1 and stack the
/// strip each point adds above its successor's f2.
fn hv2(points: &[&[f64]], r: &[f64]) -> f64 {
    let front = staircase2(points);
    let mut hv = 0.0;
    for (i, p) in front.iter().enumerate() {
        let next_y = if i + 1 < front.len() { front[i + 1][1] } else { r[1] };
        hv += (p[0] - r[0]) * (p[1] - next_y);
    }
    hv
}

/// Non-dominated 2D staircase sorted by descending f2 (ascending f1).
fn staircase2(points: &[&[f64]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    // Descending f2, then descending f1 so the first point at each f2 level
    // is the widest; the sweep keeps only strictly increasing f1.
    pts.sort_unstable_by(|a, b| b[1].total_cmp(&a[1]).then(b[0].total_cmp(&a[0])));
    // Walking down in f2, a point joins the staircase only by extending the
    // best f1 seen so far, leaving the front in ascending-f1 order.
    let mut front: Vec<[f64; 2]> = Vec::new();
    let mut best_x = f64::NEG_INFINITY;
    for p in pts {
        if p[0] > best_x {
            best_x = p[0];
            front.push(p);
        }
    }
    front
}

/// 3D dimension sweep: slice at each distinct f3 level from the top; each
/// slab's volume is its thickness times the 2D hypervolume of the points
/// reaching at least that high.
fn hv3(points: &[&[f64]], r: &[f64]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let mut levels: Vec<f64> = points.iter().map(|p| p[2]).collect();
    levels.sort_unstable_by(|a, b| b.total_cmp(a));
    levels.dedup();

    let mut hv = 0.0;
    let mut slice: Vec<&[f64]> = Vec::new();
    for (i, &z) in levels.iter().enumerate() {
        slice.extend(points.iter().filter(|p| p[2] == z).copied());
        let z_below = if i + 1 < levels.len() { levels[i + 1] } else { r[2] };
        hv += (z - z_below) * hv2(&slice, r);
    }
    hv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::ReferencePoint;

    fn ovs(points: &[&[f64]]) -> Vec<ObjectiveVector> {
        points
            .iter()
            .map(|p| ObjectiveVector::new(p.to_vec()).unwrap())
            .collect()
    }

    fn refpt(values: &[f64]) -> ReferencePoint {
        ReferencePoint::new(values.to_vec()).unwrap()
    }

    #[test]
    fn unit_box() {
        let hv = hypervolume(&ovs(&[&[1.0, 1.0]]), &refpt(&[0.0, 0.0])).unwrap();
        assert_eq!(hv, 1.0);
    }

    #[test]
    fn two_overlapping_squares() {
        let hv = hypervolume(&ovs(&[&[0.5, 1.0], &[1.0, 0.5]]), &refpt(&[0.0, 0.0])).unwrap();
        assert!((hv - 0.75).abs() < 1e-15);
    }

    #[test]
    fn points_not_dominating_the_reference_are_dropped() {
        // Second point ties r in f2, third is below r in f1.
        let hv = hypervolume(
            &ovs(&[&[1.0, 1.0], &[2.0, 0.0], &[-0.5, 3.0]]),
            &refpt(&[0.0, 0.0]),
        )
        .unwrap();
        assert_eq!(hv, 1.0);
    }

    #[test]
    fn dominated_points_do_not_change_the_area() {
        let base = hypervolume(&ovs(&[&[0.5, 1.0], &[1.0, 0.5]]), &refpt(&[0.0, 0.0])).unwrap();
        let with_inner = hypervolume(
            &ovs(&[&[0.5, 1.0], &[1.0, 0.5], &[0.4, 0.9], &[0.5, 1.0]]),
            &refpt(&[0.0, 0.0]),
        )
        .unwrap();
        assert_eq!(base, with_inner);
    }

    #[test]
    fn empty_front_has_zero_volume() {
        let hv = hypervolume(&[], &refpt(&[0.0, 0.0])).unwrap();
        assert_eq!(hv, 0.0);
    }

    #[test]
    fn three_dimensional_corner_boxes() {
        // Two disjoint unit cubes stacked along f3 share the [0,1]^2 base:
        // (1,1,2) dominates a 1x1x2 column; (2,2,1) adds an L-shaped slab.
        let hv = hypervolume(
            &ovs(&[&[1.0, 1.0, 2.0], &[2.0, 2.0, 1.0]]),
            &refpt(&[0.0, 0.0, 0.0]),
        )
        .unwrap();
        // Slab z in (1,2]: only the column, area 1. Slab z in (0,1]: union
        // of 1x1 and 2x2 squares, area 4. Total 1 + 4 = 5.
        assert!((hv - 5.0).abs() < 1e-15);
    }

    #[test]
    fn four_objectives_are_unsupported() {
        let err = hypervolume(&ovs(&[&[1.0, 1.0, 1.0, 1.0]]), &refpt(&[0.0, 0.0, 0.0, 0.0]));
        assert_eq!(
            err,
            Err(CoreError::UnsupportedObjectiveCount { objectives: 4 })
        );
    }
}
