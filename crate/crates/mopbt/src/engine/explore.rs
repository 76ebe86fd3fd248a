//! Hyperparameter perturbation applied after a checkpoint copy.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::MutationKind;
use crate::space::{HyperparamVector, SearchSpace};

/// Shifts ordinal index `idx` by `shift` (negated when `negate`), clamping
/// to `[0, len)` rather than wrapping, so extreme values stay local.
pub(crate) fn apply_shift(idx: usize, shift: u8, negate: bool, len: usize) -> usize {
    let delta = if negate { -(shift as i64) } else { shift as i64 };
    (idx as i64 + delta).clamp(0, len as i64 - 1) as usize
}

/// Local perturbation: per coordinate, resample uniformly with probability
/// `p`, otherwise shift the ordinal index by a uniform draw from {0,1,2,3},
/// negated with probability one half.
pub fn explore(
    h: &HyperparamVector,
    space: &SearchSpace,
    p: f64,
    rng: &mut ChaCha8Rng,
) -> HyperparamVector {
    let indices = h
        .indices
        .iter()
        .zip(space.domains())
        .map(|(&idx, domain)| {
            if rng.random::<f64>() < p {
                rng.random_range(0..domain.len())
            } else {
                let shift = rng.random_range(0..4u8);
                let negate = rng.random::<bool>();
                apply_shift(idx, shift, negate, domain.len())
            }
        })
        .collect();
    HyperparamVector::new(indices)
}

/// Non-local ablation: per coordinate, resample uniformly with probability
/// 1/P (P = number of hyperparameters), otherwise keep the exact index.
pub fn explore_random(
    h: &HyperparamVector,
    space: &SearchSpace,
    rng: &mut ChaCha8Rng,
) -> HyperparamVector {
    let p = 1.0 / space.num_params() as f64;
    let indices = h
        .indices
        .iter()
        .zip(space.domains())
        .map(|(&idx, domain)| {
            if rng.random::<f64>() < p {
                rng.random_range(0..domain.len())
            } else {
                idx
            }
        })
        .collect();
    HyperparamVector::new(indices)
}

/// Dispatches on the configured mutation kind.
pub fn mutate(
    h: &HyperparamVector,
    space: &SearchSpace,
    kind: MutationKind,
    resample_probability: f64,
    rng: &mut ChaCha8Rng,
) -> HyperparamVector {
    match kind {
        MutationKind::Local => explore(h, space, resample_probability, rng),
        MutationKind::Random => explore_random(h, space, rng),
    }
}
