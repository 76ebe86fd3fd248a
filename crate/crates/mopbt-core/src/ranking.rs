use alloc::vec;
use alloc::vec::Vec;

use crate::{FrontPartition, ObjectiveVector};

/// Ranks a population by fronts, scattering ties within each front.
///
/// Returns a permutation of population indices, best first. Fronts are
/// emitted in order; inside the first front the point with the largest
/// first objective leads, and every subsequent point (within its front) is
/// the one whose minimum Euclidean distance to *all* previously emitted
/// points is largest. Distances use raw objective values; see
/// [`greedy_scattered_subset_order_with`] for the normalized variant.
/// All ties break toward the lowest population index.
pub fn greedy_scattered_subset_order(
    partition: &FrontPartition,
    objectives: &[ObjectiveVector],
) -> Vec<usize> {
    greedy_scattered_subset_order_with(partition, objectives, false)
}

/// [`greedy_scattered_subset_order`] with optional per-objective min-max
/// normalization of the distance space. Off by default because raw
/// distances keep the ranking scale-aware; the flag exists for studies on
/// objectives with wildly different ranges.
pub fn greedy_scattered_subset_order_with(
    partition: &FrontPartition,
    objectives: &[ObjectiveVector],
    normalize: bool,
) -> Vec<usize> {
    let n = objectives.len();
    let total: usize = partition.fronts().iter().map(Vec::len).sum();
    assert_eq!(total, n, "partition must cover the population exactly");
    if n == 0 {
        return Vec::new();
    }

    let points = distance_space(objectives, normalize);
    let d2 = |a: usize, b: usize| -> f64 {
        points[a]
            .iter()
            .zip(points[b].iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum()
    };

    let mut order: Vec<usize> = Vec::with_capacity(n);
    // Squared distance from each not-yet-emitted point to the emitted set.
    let mut min_d2 = vec![f64::INFINITY; n];
    let mut emitted = vec![false; n];

    let emit = |idx: usize, order: &mut Vec<usize>, min_d2: &mut [f64], emitted: &mut [bool]| {
        emitted[idx] = true;
        order.push(idx);
        for j in 0..n {
            if !emitted[j] {
                let d = d2(idx, j);
                if d < min_d2[j] {
                    min_d2[j] = d;
                }
            }
        }
    };

    for front in partition.fronts() {
        let mut remaining = front.len();
        if order.is_empty() {
            // Seed the whole ordering with the best first objective.
            let mut seed = front[0];
            for &i in &front[1..] {
                if objectives[i].values()[0] > objectives[seed].values()[0] {
                    seed = i;
                }
            }
            emit(seed, &mut order, &mut min_d2, &mut emitted);
            remaining -= 1;
        }
        while remaining > 0 {
            let mut best = usize::MAX;
            let mut best_d = f64::NEG_INFINITY;
            for &i in front {
                if !emitted[i] && min_d2[i] > best_d {
                    best = i;
                    best_d = min_d2[i];
                }
            }
            emit(best, &mut order, &mut min_d2, &mut emitted);
            remaining -= 1;
        }
    }
    order
}

/// Objective values, optionally min-max scaled per coordinate.
fn distance_space(objectives: &[ObjectiveVector], normalize: bool) -> Vec<Vec<f64>> {
    if !normalize {
        return objectives.iter().map(|o| o.values().to_vec()).collect();
    }
    let k = objectives[0].len();
    let mut lo = vec![f64::INFINITY; k];
    let mut hi = vec![f64::NEG_INFINITY; k];
    for o in objectives {
        for (j, &v) in o.values().iter().enumerate() {
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    objectives
        .iter()
        .map(|o| {
            o.values()
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let range = hi[j] - lo[j];
                    if range > 0.0 {
                        (v - lo[j]) / range
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Crowding distance of each member of one front.
///
/// Returned values parallel `front`. Boundary points of every objective get
/// infinity; interior points accumulate the normalized side lengths of the
/// cuboid spanned by their sorted neighbors. Objectives with zero range are
/// skipped.
pub fn crowding_distances(front: &[usize], objectives: &[ObjectiveVector]) -> Vec<f64> {
    let m = front.len();
    if m == 0 {
        return Vec::new();
    }
    if m <= 2 {
        return vec![f64::INFINITY; m];
    }
    let k = objectives[front[0]].len();
    let mut dist = vec![0.0f64; m];
    for obj in 0..k {
        let mut by_value: Vec<usize> = (0..m).collect();
        by_value.sort_unstable_by(|&a, &b| {
            let va = objectives[front[a]].values()[obj];
            let vb = objectives[front[b]].values()[obj];
            va.total_cmp(&vb).then(front[a].cmp(&front[b]))
        });
        let lo = objectives[front[by_value[0]]].values()[obj];
        let hi = objectives[front[by_value[m - 1]]].values()[obj];
        dist[by_value[0]] = f64::INFINITY;
        dist[by_value[m - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..m - 1 {
            let prev = objectives[front[by_value[w - 1]]].values()[obj];
            let next = objectives[front[by_value[w + 1]]].values()[obj];
            dist[by_value[w]] += (next - prev) / range;
        }
    }
    dist
}

/// Ranks a population by fronts, ordering each front by descending crowding
/// distance. The alternative to [`greedy_scattered_subset_order`]; ties
/// break toward the lowest population index.
pub fn crowding_distance_order(
    partition: &FrontPartition,
    objectives: &[ObjectiveVector],
) -> Vec<usize> {
    let total: usize = partition.fronts().iter().map(Vec::len).sum();
    assert_eq!(total, objectives.len(), "partition must cover the population exactly");

    let mut order: Vec<usize> = Vec::with_capacity(objectives.len());
    for front in partition.fronts() {
        let dist = crowding_distances(front, objectives);
        let mut members: Vec<usize> = (0..front.len()).collect();
        members.sort_unstable_by(|&a, &b| {
            dist[b].total_cmp(&dist[a]).then(front[a].cmp(&front[b]))
        });
        order.extend(members.into_iter().map(|w| front[w]));
    }
    order
}
