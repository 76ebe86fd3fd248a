//! Cross-checks the fast non-dominated sort and the ranking orders against
//! independent, brute-force re-derivations.

use mopbt_core::{
    constraint_dominates, crowding_distance_order, crowding_distances, dominates,
    greedy_scattered_subset_order, non_dominated_sort, non_dominated_sort_constrained,
    ConstraintStatus, ObjectiveVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Oracle domination, written from the definition, not the library.
fn dom(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

fn dom_constrained(a: &[f64], ca: ConstraintStatus, b: &[f64], cb: ConstraintStatus) -> bool {
    if ca.is_feasible() && !cb.is_feasible() {
        return true;
    }
    if !ca.is_feasible() && cb.is_feasible() {
        return false;
    }
    if !ca.is_feasible() && !cb.is_feasible() {
        return ca.violation() < cb.violation();
    }
    dom(a, b)
}

/// Oracle partition by repeated filtering: peel the currently non-dominated
/// subset until nothing is left.
fn oracle_partition(points: &[ObjectiveVector], beats: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| j != i && beats(j, i)))
            .collect();
        assert!(!front.is_empty(), "domination must be acyclic");
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Random population; on half the instances values snap to a coarse grid to
/// exercise exact ties and duplicates.
fn random_population(seed: u64) -> Vec<ObjectiveVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=64);
    let k = if rng.random_bool(0.5) { 2 } else { 3 };
    let gridded = rng.random_bool(0.5);
    (0..n)
        .map(|_| {
            let values: Vec<f64> = (0..k)
                .map(|_| {
                    let v: f64 = rng.random();
                    if gridded {
                        (v * 4.0).round() / 4.0
                    } else {
                        v
                    }
                })
                .collect();
            ObjectiveVector::new(values).unwrap()
        })
        .collect()
}

fn random_constraints(seed: u64, n: usize) -> Vec<ConstraintStatus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                ConstraintStatus::feasible()
            } else {
                // Grid-valued violations force equal-violation ties too.
                let v = f64::from(rng.random_range(1..=4u32)) * 0.25;
                ConstraintStatus::infeasible(v).unwrap()
            }
        })
        .collect()
}

#[test]
fn non_dominated_sort_matches_repeated_filter_oracle() {
    for seed in 0..300 {
        let pop = random_population(seed);
        let partition = non_dominated_sort(&pop).unwrap();
        let expected = oracle_partition(&pop, |a, b| dom(pop[a].values(), pop[b].values()));
        assert_eq!(partition.fronts(), expected.as_slice(), "seed {seed}");
        // Sanity anchor: the library's own pairwise relation agrees.
        for (i, a) in pop.iter().enumerate() {
            for (j, b) in pop.iter().enumerate() {
                if i != j {
                    assert_eq!(dominates(a, b).unwrap(), dom(a.values(), b.values()));
                }
            }
        }
    }
}

#[test]
fn constrained_sort_matches_repeated_filter_oracle() {
    for seed in 0..300 {
        let pop = random_population(seed);
        let cs = random_constraints(seed, pop.len());
        let partition = non_dominated_sort_constrained(&pop, &cs).unwrap();
        let expected = oracle_partition(&pop, |a, b| {
            dom_constrained(pop[a].values(), cs[a], pop[b].values(), cs[b])
        });
        assert_eq!(partition.fronts(), expected.as_slice(), "seed {seed}");
        for (i, a) in pop.iter().enumerate() {
            for (j, b) in pop.iter().enumerate() {
                if i != j {
                    assert_eq!(
                        constraint_dominates(a, &cs[i], b, &cs[j]).unwrap(),
                        dom_constrained(a.values(), cs[i], b.values(), cs[j])
                    );
                }
            }
        }
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Exhaustive per-step validation of a greedy scattered subset order.
///
/// At every position the emitted point must attain the maximum (over the
/// remaining members of its front) of the minimum distance to everything
/// emitted before it, with ties resolved toward the lower index.
pub fn check_greedy_order(order: &[usize], fronts: &[Vec<usize>], pop: &[ObjectiveVector]) {
    let ranks: Vec<usize> = {
        let mut r = vec![0; pop.len()];
        for (rank, front) in fronts.iter().enumerate() {
            for &i in front {
                r[i] = rank;
            }
        }
        r
    };
    // Fronts appear as contiguous, nondecreasing segments.
    for w in order.windows(2) {
        assert!(ranks[w[0]] <= ranks[w[1]], "front ranks out of order");
    }
    assert_eq!(order.len(), pop.len());

    for (t, &chosen) in order.iter().enumerate() {
        let front = &fronts[ranks[chosen]];
        let remaining: Vec<usize> = front
            .iter()
            .copied()
            .filter(|i| !order[..t].contains(i))
            .collect();
        assert!(remaining.contains(&chosen));
        if t == 0 {
            // Seed: best first objective, lowest index on ties.
            for &other in &remaining {
                let fv = pop[chosen].values()[0];
                let ov = pop[other].values()[0];
                assert!(fv >= ov, "seed must maximize f1");
                if fv == ov {
                    assert!(chosen <= other);
                }
            }
            continue;
        }
        let min_dist = |cand: usize| -> f64 {
            order[..t]
                .iter()
                .map(|&e| squared_distance(pop[cand].values(), pop[e].values()))
                .fold(f64::INFINITY, f64::min)
        };
        let chosen_d = min_dist(chosen);
        for &other in &remaining {
            let other_d = min_dist(other);
            assert!(
                chosen_d >= other_d,
                "position {t}: {chosen} (d={chosen_d}) beaten by {other} (d={other_d})"
            );
            if chosen_d == other_d {
                assert!(chosen <= other, "tie at position {t} must go to the lower index");
            }
        }
    }
}

#[test]
fn greedy_order_is_optimal_at_every_step() {
    for seed in 1000..1300 {
        let pop = random_population(seed);
        let partition = non_dominated_sort(&pop).unwrap();
        let order = greedy_scattered_subset_order(&partition, &pop);
        check_greedy_order(&order, partition.fronts(), &pop);
    }
}

/// Textbook crowding distance, re-derived: per objective, sort the front,
/// give the extremes infinity, and add the normalized neighbor gap.
fn oracle_crowding(front: &[usize], pop: &[ObjectiveVector]) -> Vec<f64> {
    let m = front.len();
    if m <= 2 {
        return vec![f64::INFINITY; m];
    }
    let k = pop[front[0]].len();
    let mut dist = vec![0.0; m];
    for obj in 0..k {
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&a, &b| {
            pop[front[a]].values()[obj]
                .partial_cmp(&pop[front[b]].values()[obj])
                .unwrap()
                .then(front[a].cmp(&front[b]))
        });
        dist[idx[0]] = f64::INFINITY;
        dist[idx[m - 1]] = f64::INFINITY;
        let lo = pop[front[idx[0]]].values()[obj];
        let hi = pop[front[idx[m - 1]]].values()[obj];
        if hi > lo {
            for w in 1..m - 1 {
                let gap = pop[front[idx[w + 1]]].values()[obj] - pop[front[idx[w - 1]]].values()[obj];
                dist[idx[w]] += gap / (hi - lo);
            }
        }
    }
    dist
}

#[test]
fn crowding_distances_match_textbook_oracle() {
    for seed in 2000..2300 {
        let pop = random_population(seed);
        let partition = non_dominated_sort(&pop).unwrap();
        for front in partition.fronts() {
            let got = crowding_distances(front, &pop);
            let expected = oracle_crowding(front, &pop);
            assert_eq!(got.len(), expected.len());
            for (g, e) in got.iter().zip(&expected) {
                if e.is_infinite() {
                    assert!(g.is_infinite(), "seed {seed}");
                } else {
                    assert!((g - e).abs() < 1e-12, "seed {seed}: {g} vs {e}");
                }
            }
        }
    }
}

#[test]
fn crowding_order_sorts_each_front_by_descending_distance() {
    for seed in 3000..3100 {
        let pop = random_population(seed);
        let partition = non_dominated_sort(&pop).unwrap();
        let order = crowding_distance_order(&partition, &pop);
        let mut sorted_check: Vec<usize> = order.clone();
        sorted_check.sort_unstable();
        assert_eq!(sorted_check, (0..pop.len()).collect::<Vec<_>>());

        let mut cursor = 0;
        for front in partition.fronts() {
            let segment = &order[cursor..cursor + front.len()];
            let dist = crowding_distances(front, &pop);
            let dist_of = |i: usize| dist[front.iter().position(|&f| f == i).unwrap()];
            for w in segment.windows(2) {
                let (da, db) = (dist_of(w[0]), dist_of(w[1]));
                assert!(da >= db || (da.is_infinite() && db.is_infinite()));
                if da == db {
                    assert!(w[0] < w[1], "ties must order by index");
                }
            }
            cursor += front.len();
        }
    }
}
