//! Deterministic seed splitting for per-task generators.
//!
//! A sweep seeded with `seed` gives task `i` the generator seeded with
//! `subseed(seed, i)`: SplitMix64 finalization of `seed + (i + 1)·φ64`,
//! where φ64 = 0x9E3779B97F4A7C15. Results never depend on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn subseed(seed: u64, task: u64) -> u64 {
    let mut z = seed.wrapping_add(task.wrapping_add(1).wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
