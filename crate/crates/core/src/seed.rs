//! Deterministic seed derivation.
//!
//! Every random stream in an experiment is seeded from a SHA-256 digest of
//! a tuple of integers (master seed, run index, method tag, λ, twirl id,
//! stage), truncated to 64 bits. Streams are therefore independent of the
//! order in which work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type SimRng = ChaCha8Rng;

pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(b"zne-seed-v1");
    for p in parts {
        hasher.update(p.to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn rng_from(parts: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(parts))
}

/// Stable numeric tags for the stages that consume randomness.
pub mod stage {
    pub const TWIRL: u64 = 1;
    pub const SAMPLE: u64 = 2;
    pub const P0_TWIRL: u64 = 3;
    pub const P0_SAMPLE: u64 = 4;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable_and_sensitive() {
        assert_eq!(derive_seed(&[1, 2, 3]), derive_seed(&[1, 2, 3]));
        assert_ne!(derive_seed(&[1, 2, 3]), derive_seed(&[1, 3, 2]));
        assert_ne!(derive_seed(&[1, 2]), derive_seed(&[1, 2, 0]));
    }
}
