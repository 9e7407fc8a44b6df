//! Deterministic seed derivation.
//!
//! Every random stream in the toolkit descends from one master seed. A
//! stream is identified by `(master, label, index)` and its 256-bit ChaCha
//! seed is the SHA-256 of that triple, so streams are independent of the
//! order in which they are created.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha20Rng;

pub fn derive_seed(master: u64, label: &str, index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update((label.len() as u64).to_le_bytes());
    h.update(label.as_bytes());
    h.update(index.to_le_bytes());
    h.finalize().into()
}

pub fn stream(master: u64, label: &str, index: u64) -> Rng {
    Rng::from_seed(derive_seed(master, label, index))
}
