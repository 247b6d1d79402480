//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream
//! (`rand_chacha::ChaCha8Rng`, a counter-based generator) created with
//! `ChaCha8Rng::seed_from_u64(seed)` and positioned with `set_stream(stream)`.
//! The raw 64-bit words are mapped to values as follows, so that any other
//! implementation can reproduce the same draws:
//!
//! * uniform in `[0, 1)`: `(word >> 11) as f64 * 2^-53`;
//! * index below `m`: `floor(uniform * m)`;
//! * standard normal: Box-Muller on two consecutive uniforms `u1, u2`,
//!   `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)` (the sine branch is discarded).

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct Stream {
    inner: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    #[inline]
    pub fn next_word(&mut self) -> u64 {
        self.inner.next_u64()
    }

    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_word() >> 11) as f64 * TWO_POW_M53
    }

    #[inline]
    pub fn index_below(&mut self, m: usize) -> usize {
        let k = (self.uniform() * m as f64) as usize;
        k.min(m - 1)
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// `r` distinct values from `0..n` by a partial Fisher-Yates shuffle:
/// for `k` in `0..r`, swap position `k` with `k + index_below(n - k)`.
pub(crate) fn partial_shuffle(n: usize, r: usize, stream: &mut Stream) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for k in 0..r {
        let j = k + stream.index_below(n - k);
        pool.swap(k, j);
    }
    pool.truncate(r);
    pool
}
