//! Seeded random streams.
//!
//! Every random draw in the crate comes from a [`SeedStream`]. Streams are
//! ChaCha8 generators keyed by a master seed; independent sub-streams are
//! obtained by setting the ChaCha stream id to a counter (`split(seed, i)`),
//! so the draws of trial `i` depend only on `(seed, i)` and never on the order
//! in which trials are evaluated.

use rand::{Error as RandError, Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SeedStream {
    rng: ChaCha8Rng,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Sub-stream `index` of the master `seed`.
    pub fn split(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { rng }
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen()
    }

    pub fn bit(&mut self) -> u8 {
        u8::from(self.rng.gen::<bool>())
    }
}

impl RngCore for SeedStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RandError> {
        self.rng.try_fill_bytes(dest)
    }
}
