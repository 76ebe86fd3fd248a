//! Truncation selection: pair each bottom-slice solution with a donor drawn
//! uniformly from the top slice.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A loser that will copy the donor's checkpoint and hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Replacement {
    pub loser: usize,
    pub donor: usize,
}

/// Pairs the last `cut` entries of `order` (worst solutions) with donors
/// drawn uniformly, with replacement, from the first `cut` entries. Losers
/// are emitted in their `order` positions, worst last. `cut == 0` yields no
/// pairs; the caller is expected to log a warning instead.
pub fn exploit_pairs(order: &[usize], cut: usize, rng: &mut ChaCha8Rng) -> Vec<Replacement> {
    assert!(2 * cut <= order.len(), "winner and loser slices must not overlap");
    if cut == 0 {
        return Vec::new();
    }
    let winners = &order[..cut];
    order[order.len() - cut..]
        .iter()
        .map(|&loser| Replacement { loser, donor: winners[rng.random_range(0..cut)] })
        .collect()
}
