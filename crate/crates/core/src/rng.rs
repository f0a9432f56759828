//! Seeded, splittable random streams.
//!
//! Every stochastic routine in the crate takes `&mut impl Rng`; callers that
//! need several independent streams from one seed derive them here so runs
//! are reproducible bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Independent stream `stream_id` of the generator seeded by `seed`.
pub fn stream(seed: u64, stream_id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Derive a child seed; used when a sweep fans out into per-trial runs.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser over the combined input
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
