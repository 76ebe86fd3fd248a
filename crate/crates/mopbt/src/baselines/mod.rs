//! Competitor algorithms sharing the task, run-log, and metric interfaces:
//! plain random search, multi-objective asynchronous successive halving,
//! and a generational NSGA-II.

mod mo_asha;
mod nsga2;
mod random_search;

pub use mo_asha::{mo_asha, rung_ladder, AshaConfig};
pub use nsga2::{nsga2, Nsga2Config};
pub use random_search::{random_search, RandomSearchConfig};

use mopbt_core::{greedy_scattered_subset_order, non_dominated_sort, ObjectiveVector};

use crate::Result;

/// Best→worst indices under non-dominated sorting plus greedy scattered
/// subset selection — the shared multi-objective ranking of the baselines.
pub(crate) fn greedy_order(objectives: &[Vec<f64>]) -> Result<Vec<usize>> {
    let points: Vec<ObjectiveVector> = objectives
        .iter()
        .map(|f| ObjectiveVector::new(f.clone()).map_err(crate::Error::from))
        .collect::<Result<_>>()?;
    let fronts = non_dominated_sort(&points)?;
    Ok(greedy_scattered_subset_order(&fronts, &points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_order_puts_earlier_fronts_first() {
        // (0.9, 0.1) and (0.1, 0.9) are mutually non-dominated; (0.05, 0.05)
        // is dominated by both.
        let objs = vec![vec![0.05, 0.05], vec![0.9, 0.1], vec![0.1, 0.9]];
        let order = greedy_order(&objs).unwrap();
        assert_eq!(order[2], 0);
        assert_eq!(order.len(), 3);
    }
}
