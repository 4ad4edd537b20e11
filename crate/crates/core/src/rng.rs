//! Seed splitting.
//!
//! Every random stream derives from one master seed and a textual label:
//! the child seed is the first 8 bytes (little endian) of
//! `SHA-256(master_seed.to_le_bytes() || label)`, and the generator is
//! ChaCha8 seeded from that `u64`. The algorithm is fixed so results do not
//! depend on the platform's default generator.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha8Rng;

pub fn split_seed(master: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(label.as_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn rng_for(master: u64, label: &str) -> Rng {
    Rng::seed_from_u64(split_seed(master, label))
}

pub fn rng_from(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}
