//! Deterministic seed derivation.
//!
//! Every random stream in the pipeline is a `ChaCha8Rng` keyed by a seed
//! derived from one master seed and a path of stream tags, so results never
//! depend on scheduling or on how many draws another stream consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One splitmix64 step.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `tag` of `parent`.
pub fn derive(parent: u64, tag: u64) -> u64 {
    mix(mix(parent) ^ tag.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
