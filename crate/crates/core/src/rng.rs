//! Seedable uniform generator with a fully specified output stream.
//!
//! The generator is PCG32 (XSH-RR variant, 64-bit state, 32-bit output):
//!
//! ```text
//! inc   = (stream << 1) | 1
//! state = 0; step(); state += seed; step()          // seeding
//! step: state = state * 6364136223846793005 + inc   (mod 2^64)
//! out:  old = state before step
//!       xs  = (((old >> 18) ^ old) >> 27) as u32
//!       rot = (old >> 59) as u32
//!       u32 = xs.rotate_right(rot)
//! ```
//!
//! A uniform double is built from two consecutive outputs `hi`, `lo` as
//! `((hi << 32 | lo) >> 11) * 2^-53`, which lies in [0, 1). Any
//! implementation following these steps reproduces the same streams.

use serde::{Deserialize, Serialize};

const MULTIPLIER: u64 = 6_364_136_223_846_793_005;

/// Generator state: a seed and a stream selector plus the live PCG state.
///
/// Distinct stream counters under the same seed give independent sequences;
/// identical `(seed, stream)` pairs give bit-identical ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngState {
    seed: u64,
    stream: u64,
    state: u64,
    inc: u64,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = Self {
            seed,
            stream,
            state: 0,
            inc: (stream << 1) | 1,
        };
        rng.step();
        rng.state = rng.state.wrapping_add(seed);
        rng.step();
        rng
    }

    /// Stream 0 of `seed`.
    pub fn from_seed(seed: u64) -> Self {
        Self::new(seed, 0)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A fresh generator on another stream of the same seed.
    pub fn fork(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }

    fn step(&mut self) {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(self.inc);
    }

    pub fn next_u32(&mut self) -> u32 {
        let old = self.state;
        self.step();
        let xorshifted = (((old >> 18) ^ old) >> 27) as u32;
        let rot = (old >> 59) as u32;
        xorshifted.rotate_right(rot)
    }

    pub fn next_u64(&mut self) -> u64 {
        let hi = u64::from(self.next_u32());
        let lo = u64::from(self.next_u32());
        (hi << 32) | lo
    }

    /// Uniform double in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform double in (0, 1], safe to take the logarithm of.
    pub fn uniform_open_zero(&mut self) -> f64 {
        1.0 - self.uniform()
    }
}
