//! Seeded randomness.
//!
//! Every randomized operation draws from ChaCha8 (`rand_chacha` 0.3) seeded
//! with `SeedableRng::seed_from_u64`. Both the stream cipher and the
//! seed expansion are fixed, portable algorithms, so a seed reproduces the
//! same draws on every platform. [`RNG_ALGORITHM`] names the scheme and is
//! written into report headers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const RNG_ALGORITHM: &str = "chacha8-v1";

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a stream label and an index (SplitMix64 finalizer),
/// giving independent seeds for retries and sub-streams.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
