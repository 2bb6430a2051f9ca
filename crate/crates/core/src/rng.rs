//! Seeded, splittable random streams.
//!
//! A stream is ChaCha12 keyed by `seed` with `stream_id` selecting the
//! cipher's stream (nonce), so distinct ids give non-overlapping
//! keystreams and `(seed, stream_id)` reproduces the same bytes on every
//! platform.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

/// Draws per chunk in [`par_chunks`].
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self { seed, stream_id, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Stream `stream_id` of the same seed, starting from the beginning.
    pub fn sibling(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    /// Independent stream number `i` below this one, keyed by a SplitMix64
    /// hash of `(stream_id, i)` so nested children do not collide.
    pub fn child(&self, i: u64) -> Self {
        Self::new(self.seed, splitmix64(splitmix64(self.stream_id) ^ i))
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn open01(&mut self) -> f64 {
        loop {
            // 53 random bits, offset by half an ulp so 0 is impossible.
            let u = ((self.inner.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
            if u < 1.0 {
                return u;
            }
        }
    }

    /// Standard exponential.
    pub fn exp1(&mut self) -> f64 {
        -self.open01().ln()
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.inner.random::<f64>()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `f(stream, k)` over `total` items cut into chunks of [`CHUNK`];
/// chunk `i` gets `parent.child(i)`. The result is the concatenation in
/// chunk order, so it does not depend on the number of worker threads.
pub fn par_chunks<T, F>(parent: &RngStream, total: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream, usize) -> Vec<T> + Sync,
{
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let k = CHUNK.min(total - i * CHUNK);
            f(&mut parent.child(i as u64), k)
        })
        .collect();
    parts.into_iter().flatten().collect()
}
