use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Seeded ChaCha20 stream. Equal seeds give bit-identical output; streams
/// obtained from [`RngStream::split`] use disjoint ChaCha stream ids.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, inner: ChaCha20Rng::seed_from_u64(seed) }
    }

    /// Independent stream `index` under the same seed. Stream 0 is the one
    /// returned by [`RngStream::new`].
    pub fn split(&self, index: u64) -> RngStream {
        let mut inner = ChaCha20Rng::seed_from_u64(self.seed);
        inner.set_stream(index);
        RngStream { seed: self.seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// 32-bit words consumed so far.
    pub fn counter(&self) -> u128 {
        self.inner.get_word_pos()
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
