//! Reproducible random streams.
//!
//! Every stochastic operation draws from an [`RngStream`], which wraps a
//! ChaCha8 generator keyed by a 64-bit seed and selected by a 64-bit stream
//! id (`ChaCha8Rng::seed_from_u64(seed)` followed by `set_stream(stream_id)`).
//! ChaCha8 output is specified bit-for-bit, so a given `(seed, stream_id)`
//! pair produces the same deviates on every platform. Parallel trials use
//! the trial index as the stream id.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform deviate on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn coin(&mut self) -> bool {
        self.inner.random::<bool>()
    }

    /// Standard normal deviate (ziggurat, from `rand_distr`).
    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.random::<u64>()
    }
}
