use alloc::vec;
use alloc::vec::Vec;

use crate::dominance::{constraint_dominates_values, dominates_values};
use crate::{ConstraintStatus, CoreError, ObjectiveVector, Result};

/// A partition of population indices into successive non-dominated fronts.
///
/// Front 0 holds the points dominated by nobody; front `k+1` holds the
/// points dominated only by members of fronts `0..=k`. Every input index
/// appears in exactly one front, and indices inside each front are sorted
/// ascending so downstream tie-breaking is independent of discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontPartition {
    fronts: Vec<Vec<usize>>,
}

impl FrontPartition {
    /// The fronts, best first.
    pub fn fronts(&self) -> &[Vec<usize>] {
        &self.fronts
    }

    /// Number of fronts.
    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    /// True when there are no fronts (never for a nonempty population).
    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    /// Front index (0 = best) of each population member.
    pub fn rank_of(&self) -> Vec<usize> {
        let total: usize = self.fronts.iter().map(Vec::len).sum();
        let mut ranks = vec![0usize; total];
        for (rank, front) in self.fronts.iter().enumerate() {
            for &idx in front {
                ranks[idx] = rank;
            }
        }
        ranks
    }
}

/// Fast non-dominated sort over a population of objective vectors.
///
/// Runs in `O(n^2 K)`: one pass fills a domination count and dominated-set
/// per point, then fronts are peeled by decrementing counts.
pub fn non_dominated_sort(objectives: &[ObjectiveVector]) -> Result<FrontPartition> {
    sort_with(objectives, None)
}

/// Non-dominated sort under constraint domination.
///
/// `constraints` must parallel `objectives`; feasibility then takes priority
/// over objective values exactly as in [`crate::constraint_dominates`].
pub fn non_dominated_sort_constrained(
    objectives: &[ObjectiveVector],
    constraints: &[ConstraintStatus],
) -> Result<FrontPartition> {
    if constraints.len() != objectives.len() {
        return Err(CoreError::LengthMismatch {
            expected: objectives.len(),
            actual: constraints.len(),
        });
    }
    sort_with(objectives, Some(constraints))
}

fn sort_with(
    objectives: &[ObjectiveVector],
    constraints: Option<&[ConstraintStatus]>,
) -> Result<FrontPartition> {
    let n = objectives.len();
    if n == 0 {
        return Err(CoreError::EmptyInput);
    }
    let k = objectives[0].len();
    for o in objectives {
        if o.len() != k {
            return Err(CoreError::LengthMismatch { expected: k, actual: o.len() });
        }
    }

    let beats = |a: usize, b: usize| -> bool {
        match constraints {
            None => dominates_values(objectives[a].values(), objectives[b].values()),
            Some(cs) => constraint_dominates_values(
                objectives[a].values(),
                &cs[a],
                objectives[b].values(),
                &cs[b],
            ),
        }
    };

    let mut dominated_by = vec![0usize; n];
    let mut dominated_sets: Vec<Vec<usize>> = vec![Vec::new(); n];

    for i in 0..n {
        for j in (i + 1)..n {
            if beats(i, j) {
                dominated_sets[i].push(j);
                dominated_by[j] += 1;
            } else if beats(j, i) {
                dominated_sets[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();

    let mut fronts: Vec<Vec<usize>> = Vec::new();
    while !current.is_empty() {
        let mut next: Vec<usize> = Vec::new();
        for &p in &current {
            for &q in &dominated_sets[p] {
                dominated_by[q] -= 1;
                if dominated_by[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(core::mem::replace(&mut current, next));
    }
    Ok(FrontPartition { fronts })
}
