//! Deterministic randomness.
//!
//! Every generator in this crate draws from SplitMix64 (Steele, Lea and
//! Flood, 2014): the state advances by the golden-ratio increment
//! `0x9E3779B97F4A7C15` and each output is the state passed through the
//! finalizer
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! Uniform reals on `[0, 1)` take the top 53 bits of one output and scale
//! by `2^-53`. Batch members get independent streams through
//! [`derive_seed`], which runs `mix64(seed) ^ index` through the same
//! finalizer. Mixing the root seed first keeps nearby roots from sharing
//! members: with a raw `seed ^ index`, roots 0 and 1 would draw the same
//! batch in a different order.

use rand::RngCore;
use rand::SeedableRng;
pub use rand_xoshiro::SplitMix64;

/// Seeded generator used throughout the crate.
pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// The SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the `index`-th member of a batch started from `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(mix64(seed) ^ index)
}

/// Uniform draw on `[0, 1)` with 53 bits of mantissa.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..n` by rejection, free of modulo bias.
pub fn index<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    assert!(n > 0);
    let n = n as u64;
    let zone = u64::MAX - (u64::MAX % n);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return (x % n) as usize;
        }
    }
}

/// In-place Fisher–Yates shuffle (from the back, swapping with `index(i + 1)`).
pub fn shuffle<T, R: RngCore + ?Sized>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = index(rng, i + 1);
        items.swap(i, j);
    }
}
