//! Counter-based randomness.
//!
//! Every random quantity in a run is a pure function of
//! `(master seed, stream, trial index, counter)`, so trials can be
//! evaluated in any order, on any number of threads, and lazily (a single
//! coordinate of a single sample point can be regenerated on demand).
//!
//! Within a key the `k`-th draw is `mix64(key + (k + 1) * GOLDEN_GAMMA)`,
//! which is exactly the SplitMix64 output sequence seeded with `key`.

use serde::{Deserialize, Serialize};

/// `2^64 / φ`, the SplitMix64 increment.
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stafford's "mix13" finalizer: a bijective 64-bit avalanche function.
#[inline(always)]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `k`-th 64-bit uniform of the stream keyed by `key`.
#[inline(always)]
pub fn stream_u64(key: u64, k: u64) -> u64 {
    mix64(key.wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Master seed plus stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master: u64,
    pub stream: u64,
}

impl RngSeed {
    pub const fn new(master: u64, stream: u64) -> Self {
        Self { master, stream }
    }

    /// Key of trial `t`: `mix64(master ^ mix64(γ·(stream+1)) ^ γ·(t+1))`.
    #[inline]
    pub fn trial(&self, t: u64) -> u64 {
        let stream_key = mix64(GOLDEN_GAMMA.wrapping_mul(self.stream.wrapping_add(1)));
        mix64(self.master ^ stream_key ^ GOLDEN_GAMMA.wrapping_mul(t.wrapping_add(1)))
    }

    /// Seed for a named sub-stream of trial `t`.
    #[inline]
    pub fn child(&self, t: u64, stream: u64) -> RngSeed {
        RngSeed::new(self.trial(t), stream)
    }
}

/// `ceil(p · 2^64)`, so that a uniform `u / 2^64` satisfies `U < p` iff
/// `u < threshold`. Values outside `[0, 1]` are clamped.
#[inline]
pub fn bernoulli_threshold(p: f64) -> u128 {
    if p.is_nan() || p <= 0.0 {
        0
    } else if p >= 1.0 {
        1u128 << 64
    } else {
        (p * 18_446_744_073_709_551_616.0).ceil() as u128
    }
}

/// Maps a uniform 64-bit value onto `0..n` (multiply-shift).
#[inline]
pub fn uniform_below(u: u64, n: u64) -> u64 {
    ((u as u128 * n as u128) >> 64) as u64
}
