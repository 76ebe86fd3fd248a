//! Best→worst population orderings for the exploit step.

use mopbt_core::{
    crowding_distance_order, greedy_scattered_subset_order, max_scalarization,
    non_dominated_sort, non_dominated_sort_constrained, sample_unit_weight, ConstraintStatus,
    ObjectiveVector,
};
use rand_chacha::ChaCha8Rng;

use super::{RankingMode, Solution};
use crate::{Error, Result};

/// Orders the population best→worst under `ranking`.
///
/// `weight_table` is only consulted by max-scalarized ranking; it must be
/// the run's fixed table. `rng` is only consumed by scalarized ranking,
/// which resamples its weight vector on every call. Every solution must
/// have been evaluated at least once.
pub fn sort_population(
    pop: &[Solution],
    ranking: &RankingMode,
    constraints: bool,
    weight_table: &[Vec<f64>],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<usize>> {
    let points: Vec<ObjectiveVector> = pop
        .iter()
        .map(|s| {
            let f = s.objectives.as_ref().ok_or_else(|| {
                Error::Runtime(format!("solution {} ranked before evaluation", s.id))
            })?;
            ObjectiveVector::new(f.clone()).map_err(Error::from)
        })
        .collect::<Result<_>>()?;

    match *ranking {
        RankingMode::GreedySubset | RankingMode::CrowdingDistance => {
            let fronts = if constraints {
                let status: Vec<ConstraintStatus> = pop
                    .iter()
                    .map(|s| {
                        ConstraintStatus::from_violation(s.violation.unwrap_or(0.0))
                            .map_err(Error::from)
                    })
                    .collect::<Result<_>>()?;
                non_dominated_sort_constrained(&points, &status)?
            } else {
                non_dominated_sort(&points)?
            };
            Ok(match *ranking {
                RankingMode::GreedySubset => greedy_scattered_subset_order(&fronts, &points),
                _ => crowding_distance_order(&fronts, &points),
            })
        }
        RankingMode::Scalarized { scalarizer } => {
            let k = points[0].len();
            let w = sample_unit_weight(rng, k)?;
            let kind = scalarizer.to_kind();
            let scores: Vec<f64> = points
                .iter()
                .map(|f| kind.apply(f, &w).map_err(Error::from))
                .collect::<Result<_>>()?;
            Ok(descending_order(&scores))
        }
        RankingMode::MaxScalarized { scalarizer, .. } => {
            let kind = scalarizer.to_kind();
            let scores: Vec<f64> = points
                .iter()
                .map(|f| max_scalarization(f, weight_table, kind).map_err(Error::from))
                .collect::<Result<_>>()?;
            Ok(descending_order(&scores))
        }
        RankingMode::SingleObjective { index } => {
            let scores: Vec<f64> = points
                .iter()
                .map(|f| {
                    f.values().get(index).copied().ok_or_else(|| {
                        Error::Runtime(format!("objective index {index} out of range"))
                    })
                })
                .collect::<Result<_>>()?;
            Ok(descending_order(&scores))
        }
    }
}

fn descending_order(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ScalarizerSpec;
    use crate::rngutil::{self, stream};
    use crate::space::HyperparamVector;

    fn pop(points: &[Vec<f64>]) -> Vec<Solution> {
        points
            .iter()
            .enumerate()
            .map(|(id, f)| {
                let mut s = Solution::new(id, HyperparamVector::new(vec![0]));
                s.objectives = Some(f.clone());
                s
            })
            .collect()
    }

    fn rng() -> ChaCha8Rng {
        rngutil::derive_rng(0, &[stream::RANK, 0])
    }

    #[test]
    fn greedy_order_starts_at_the_largest_f1() {
        let pop = pop(&[vec![0.2, 0.9], vec![0.9, 0.1], vec![0.5, 0.5]]);
        let order =
            sort_population(&pop, &RankingMode::GreedySubset, false, &[], &mut rng()).unwrap();
        assert_eq!(order[0], 1);
        assert_eq!(order.len(), 3);
    }

    #[test]
    fn single_objective_orders_by_that_objective() {
        let pop = pop(&[vec![0.1, 9.0], vec![0.9, 1.0], vec![0.5, 5.0]]);
        let order = sort_population(
            &pop,
            &RankingMode::SingleObjective { index: 0 },
            false,
            &[],
            &mut rng(),
        )
        .unwrap();
        assert_eq!(order, vec![1, 2, 0]);
    }

    #[test]
    fn unevaluated_solutions_cannot_be_ranked() {
        let mut p = pop(&[vec![0.1, 0.2], vec![0.3, 0.4]]);
        p[1].objectives = None;
        let err = sort_population(&p, &RankingMode::GreedySubset, false, &[], &mut rng());
        assert!(matches!(err, Err(Error::Runtime(_))));
    }

    #[test]
    fn constraint_domination_puts_feasible_solutions_first() {
        // Index 1 dominates on objectives but is infeasible.
        let mut p = pop(&[vec![0.1, 0.1], vec![0.9, 0.9]]);
        p[1].violation = Some(2.0);
        let unconstrained =
            sort_population(&p, &RankingMode::GreedySubset, false, &[], &mut rng()).unwrap();
        assert_eq!(unconstrained, vec![1, 0]);
        let constrained =
            sort_population(&p, &RankingMode::GreedySubset, true, &[], &mut rng()).unwrap();
        assert_eq!(constrained, vec![0, 1]);
    }

    #[test]
    fn scalarized_ranking_resamples_weights_per_call() {
        // Two incomparable points: which one wins depends on the weight
        // draw, so across many calls both must appear first at least once.
        let p = pop(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let ranking =
            RankingMode::Scalarized { scalarizer: ScalarizerSpec::WeightedSum };
        let mut rng = rng();
        let mut winners = [0usize; 2];
        for _ in 0..64 {
            let order = sort_population(&p, &ranking, false, &[], &mut rng).unwrap();
            winners[order[0]] += 1;
        }
        assert!(winners[0] > 0 && winners[1] > 0, "winners = {winners:?}");
    }

    #[test]
    fn max_scalarized_ranking_prefers_points_good_under_some_weight() {
        let table = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]];
        // Point 1 is best under (0,1); point 0 is mediocre everywhere.
        let p = pop(&[vec![0.4, 0.4], vec![0.1, 1.0]]);
        let ranking = RankingMode::MaxScalarized {
            scalarizer: ScalarizerSpec::WeightedSum,
            weights: 3,
        };
        let order = sort_population(&p, &ranking, false, &table, &mut rng()).unwrap();
        assert_eq!(order, vec![1, 0]);
    }
}
