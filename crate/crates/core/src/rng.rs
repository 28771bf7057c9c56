//! Seed handling shared by every stochastic routine.
//!
//! All randomness flows from ChaCha8 generators. Derived streams (members,
//! restarts, bootstrap resamples) get their own 64-bit seed from
//! [`sub_seed`], so any one of them can be regenerated in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th derived stream: `mix64(mix64(seed) ^ index)`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    mix64(mix64(seed) ^ index)
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
