//! Seed derivation.
//!
//! All randomness flows from `ChaCha8Rng`. A 64-bit seed selects the key
//! (via `seed_from_u64`) and the 64-bit ChaCha stream id selects an
//! independent sequence under that key. Sampling attribute `i` of a graph
//! with seed `s` uses key `s`, stream `i`. Experiment trials get their seed
//! from [`derive_seed`], a SplitMix64-style hash of the path of indices that
//! identifies the trial.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes `master` together with an ordered list of indices.
///
/// Distinct index paths give unrelated seeds; the result depends only on the
/// inputs, never on scheduling.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut h = mix64(master.wrapping_add(GOLDEN));
    for &x in path {
        h = mix64(h ^ mix64(x.wrapping_add(GOLDEN)).wrapping_add(GOLDEN));
    }
    h
}

/// Generator seeded from a single 64-bit value (stream 0).
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for stream `stream` under the key derived from `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
