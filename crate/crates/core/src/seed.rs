//! Seed handling shared by every randomized component.
//!
//! All randomness flows from xoshiro256++ streams seeded through
//! [`SeedableRng::seed_from_u64`], which expands the seed with SplitMix64.
//! Both algorithms are fixed, so a seed reproduces the same run across
//! builds and platforms.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// Name of the generator recorded in result metadata.
pub const RNG_ALGORITHM: &str = "xoshiro256++ (rand_xoshiro 0.7, seed_from_u64 via SplitMix64)";

pub type Rng = Xoshiro256PlusPlus;

pub fn rng_from_seed(seed: u64) -> Rng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent child seed from a master seed and a path of
/// indices. The result depends on every component and on their order.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut h = mix(master ^ 0x9e37_79b9_7f4a_7c15);
    for &p in path {
        h = mix(h.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ mix(p.wrapping_add(0x6a09_e667_f3bc_c909)));
    }
    h
}
