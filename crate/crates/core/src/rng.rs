//! Seed plumbing shared by the channel and the Monte Carlo oracle.
//!
//! Every random stream is a `ChaCha8Rng` seeded through `SeedableRng::seed_from_u64`.
//! Sub-streams (per frame, per Monte Carlo chunk, per step) take the seed
//! `derive_seed(root, index)`, a SplitMix64 finalizer over the pair. This
//! mapping is part of the reproducibility contract and must not change.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic child seed for sub-stream `index` of `root`.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    splitmix64(splitmix64(root.wrapping_add(GOLDEN)) ^ index.wrapping_mul(GOLDEN).wrapping_add(1))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
