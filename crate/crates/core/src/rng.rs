//! Deterministic hashing and seeded random streams.
//!
//! Augmentations and dataset splits must reproduce bit-for-bit across runs
//! and platforms, so nothing here depends on process state. Random values
//! are drawn from counter-based streams: a stream is keyed by mixing a seed
//! with a handful of integers (node index, channel, draw counter), which
//! means any draw can be recomputed in isolation.

/// FNV-1a 64-bit hash. Stable across platforms and releases, unlike
/// `std::hash::DefaultHasher`.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// SplitMix64 finalizer. Bijective on u64 with good avalanche behavior.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derives one word of a keyed stream: the seed plus every key part is
/// folded through `mix64`.
pub fn stream(seed: u64, parts: &[u64]) -> u64 {
    let mut h = mix64(seed);
    for &p in parts {
        h = mix64(h ^ p);
    }
    h
}

/// Maps a word to a uniform double in (0, 1]. The open lower bound keeps
/// `ln(u)` finite for the Gaussian transform.
pub fn unit_open(word: u64) -> f64 {
    ((word >> 11) + 1) as f64 / (1u64 << 53) as f64
}

/// Maps a word to a uniform double in [0, 1).
pub fn unit(word: u64) -> f64 {
    (word >> 11) as f64 / (1u64 << 53) as f64
}

/// One standard Gaussian draw via Box-Muller from two stream words.
pub fn gaussian(w1: u64, w2: u64) -> f64 {
    let u1 = unit_open(w1);
    let u2 = unit(w2);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Minimal sequential generator over `mix64`, for shuffles and other
/// internal draws that consume a variable number of words.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut x = self.state;
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^ (x >> 31)
    }

    /// Unbiased integer in [0, n) by rejection.
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
