//! Seed derivation. Every random draw in a scenario comes from a ChaCha
//! stream keyed by `(seed, stream tag, index)`, so two runs that ask for the
//! same key see the same numbers regardless of what else they consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STREAM_FRAME: u64 = 0x4652_414d;
pub const STREAM_CHANNEL: u64 = 0x4348_414e;
pub const STREAM_ODOMETER: u64 = 0x4f44_4f4d;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ tag) ^ index)
}

pub fn stream(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, tag, index))
}
