use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A deterministic, splittable stream of random numbers.
///
/// Backed by ChaCha8 with the 64-bit stream selector set to `stream_id`, so
/// `(master_seed, stream_id)` fully determines the draw sequence on every
/// platform, and distinct ids give independent keystreams.
#[derive(Clone, Debug)]
pub struct RandomStream {
    master_seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_id);
        Self {
            master_seed,
            stream_id,
            inner,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 32-bit words consumed so far.
    pub fn position(&self) -> u128 {
        self.inner.get_word_pos()
    }

    /// A child stream with an independently mixed seed; used to give each
    /// subsystem (data generation, bootstrap plans, MCMC) its own key.
    pub fn derive(master_seed: u64, tag: u64, stream_id: u64) -> Self {
        Self::new(mix_seed(master_seed, tag), stream_id)
    }
}

impl RngCore for RandomStream {
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

/// SplitMix64 finalizer over `seed ^ tag`.
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream id for replicate `replicate` during outer iteration `iteration`.
pub fn replicate_stream_id(iteration: usize, replicate: usize) -> u64 {
    ((iteration as u64) << 32) | (replicate as u64 & 0xFFFF_FFFF)
}
