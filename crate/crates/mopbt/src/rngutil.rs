//! Seed derivation: every random decision in a run draws from its own
//! ChaCha8 stream keyed by (run seed, purpose, identifiers), so results
//! never depend on scheduling or call order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tags for derived streams. The values are arbitrary but fixed;
/// changing them changes every seeded run.
pub mod stream {
    pub const HP_INIT: u64 = 0x01;
    pub const CKPT_INIT: u64 = 0x02;
    pub const TRAIN: u64 = 0x03;
    pub const RANK: u64 = 0x04;
    pub const DONOR: u64 = 0x05;
    pub const EXPLORE: u64 = 0x06;
    pub const WEIGHT_SET: u64 = 0x07;
    pub const TOURNAMENT: u64 = 0x08;
    pub const CROSSOVER: u64 = 0x09;
}

/// SplitMix64 finalizer; decorrelates structured tag inputs.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Derives an independent RNG from a base seed and a purpose/id tag list.
pub fn derive_rng(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut acc = splitmix64(seed);
    for &t in tags {
        acc = splitmix64(acc ^ splitmix64(t));
    }
    ChaCha8Rng::seed_from_u64(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn same_tags_reproduce_the_stream() {
        let mut a = derive_rng(7, &[stream::TRAIN, 3, 40]);
        let mut b = derive_rng(7, &[stream::TRAIN, 3, 40]);
        assert_eq!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn different_tags_give_different_streams() {
        let mut seen = std::collections::HashSet::new();
        for sol in 0..50u64 {
            for purpose in [stream::TRAIN, stream::EXPLORE, stream::RANK] {
                let v = derive_rng(7, &[purpose, sol]).next_u64();
                assert!(seen.insert(v), "stream collision for ({purpose}, {sol})");
            }
        }
        // Tag order matters: (a,b) and (b,a) are distinct streams.
        assert_ne!(
            derive_rng(7, &[1, 2]).next_u64(),
            derive_rng(7, &[2, 1]).next_u64()
        );
    }
}
