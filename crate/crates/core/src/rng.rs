//! Deterministic seeding for samplers and partitioned workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator every sampler in this crate is tested against.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for one worker of a partitioned run: same key as the master
/// seed, distinct ChaCha stream per worker index.
pub fn worker_rng(master_seed: u64, worker_index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(worker_index);
    rng
}
