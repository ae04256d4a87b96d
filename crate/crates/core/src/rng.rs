//! Deterministic random number generation.
//!
//! Every sampled quantity in this crate (point-annotation placement,
//! synthetic data) must be reproducible across runs and machines, so the
//! generator is fully specified here rather than borrowed from an external
//! crate:
//!
//! - The stream generator is SplitMix64: the state advances by the constant
//!   `0x9E3779B97F4A7C15` and each output is the finalizer
//!   `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`
//!   applied to the new state (all arithmetic mod 2^64).
//! - Keys for independent streams are derived by [`derive_key`], which folds
//!   each part into the state with the same finalizer.
//! - Strings are reduced to 64-bit parts with FNV-1a ([`fnv1a64`]).
//! - Bounded integers use rejection sampling, so they are exactly uniform.
//! - Normal deviates use the Box-Muller transform (cosine branch), two fresh
//!   uniforms per deviate.

/// SplitMix64 finalizer. Maps 0 to 0, so key derivation always offsets its
/// input by the golden-ratio constant before mixing.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Derive a stream key from a seed and a sequence of context parts
/// (for example a video-id hash and a segment index).
///
/// Streams with different parts are statistically independent; the same
/// `(seed, parts)` always yields the same key.
pub fn derive_key(seed: u64, parts: &[u64]) -> u64 {
    let mut k = mix64(seed.wrapping_add(GOLDEN));
    for &p in parts {
        k = mix64(k.wrapping_add(GOLDEN).wrapping_add(p));
    }
    k
}

/// FNV-1a 64-bit hash, used to fold string identifiers into stream keys.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// A SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Exactly uniform integer in `[0, n)`, by rejection.
    ///
    /// Panics if `n == 0`.
    pub fn uniform(&mut self, n: u64) -> u64 {
        assert!(n > 0, "uniform bound must be positive");
        // 2^64 mod n, computed without overflow; accept x in [0, 2^64 - rem)
        let rem = ((u64::MAX % n) + 1) % n;
        if rem == 0 {
            return self.next_u64() % n;
        }
        let limit = u64::MAX - rem;
        loop {
            let x = self.next_u64();
            if x <= limit {
                return x % n;
            }
        }
    }

    /// Standard normal deviate via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        // u1 in (0, 1] so the logarithm is finite
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
