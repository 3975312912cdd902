//! Splittable seeding.
//!
//! Every random stream in the crate is a ChaCha8 generator keyed by a 64-bit
//! seed that is derived from the user's master seed and a path of integers
//! (tree index, node index, round, ...). Derivation is a chain of SplitMix64
//! finalizers, so a stream depends only on its path and never on the order in
//! which streams are created. That is what makes parallel construction
//! bit-reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `seed` and a path of stream indices.
pub fn derive(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(mix64(seed), |acc, &x| mix64(acc ^ mix64(x.wrapping_mul(GOLDEN))))
}

/// Generator for the stream identified by `(seed, path)`.
pub fn stream(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, path))
}

/// Domain tags keep streams of different subsystems apart.
pub mod tag {
    pub const RPC_TREE: u64 = 1;
    pub const WY_BASELINE: u64 = 2;
    pub const MOTIF_TREE: u64 = 3;
    pub const MOTIF_WEIGHTS: u64 = 4;
    pub const GENERATOR: u64 = 5;
    pub const TRIAL: u64 = 6;
}
