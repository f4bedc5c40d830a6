//! Deterministic counter-based random streams.
//!
//! Every stream is identified by a `(seed, stream_id)` pair; the sample
//! sequence is a pure function of that pair and a rolling counter, so
//! replications on disjoint stream ids are reproducible independently of
//! scheduling. Substreams can be derived without mutating the parent.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    counter: u64,
}

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self {
            seed,
            stream_id,
            counter: 0,
        }
    }

    /// Derive an independent child stream identified by `label`,
    /// without advancing `self`.
    pub fn substream(&self, label: u64) -> Self {
        let id = mix64(self.stream_id ^ mix64(label ^ 0xD1342543DE82EF95));
        Self {
            seed: self.seed,
            stream_id: id,
            counter: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        let word = mix64(self.seed ^ GOLDEN.wrapping_mul(self.stream_id));
        mix64(word ^ self.counter.wrapping_mul(GOLDEN))
    }

    /// Uniform sample in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    /// Uniform sample in `(0, 1]`, safe as a logarithm argument.
    pub fn next_open_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) + 1) as f64 * SCALE
    }

    /// Uniform sample in `[lo, hi)`.
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform index in `0..n`.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Fill `out` with independent standard normal samples (Box-Muller).
    /// The number of uniforms consumed is a deterministic function of
    /// `out.len()`, which keeps iteration boundaries counter-aligned.
    pub fn fill_standard_normal(&mut self, out: &mut [f64]) {
        let mut i = 0;
        while i < out.len() {
            let u1 = self.next_open_f64();
            let u2 = self.next_f64();
            let radius = (-2.0 * u1.ln()).sqrt();
            let angle = std::f64::consts::TAU * u2;
            out[i] = radius * angle.cos();
            if i + 1 < out.len() {
                out[i + 1] = radius * angle.sin();
            }
            i += 2;
        }
    }

    pub fn next_standard_normal(&mut self) -> f64 {
        let mut buf = [0.0];
        self.fill_standard_normal(&mut buf);
        buf[0]
    }
}
