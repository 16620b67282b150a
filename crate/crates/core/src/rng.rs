//! Deterministic random streams keyed by `(master seed, realization, purpose)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// What a stream is used for inside one realization. Distinct purposes give
/// independent streams for the same realization index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    Generate,
    Surrogate,
    TieBreak,
}

impl StreamPurpose {
    fn salt(self) -> u64 {
        match self {
            StreamPurpose::Generate => 0x6a09_e667_f3bc_c908,
            StreamPurpose::Surrogate => 0xbb67_ae85_84ca_a73b,
            StreamPurpose::TieBreak => 0x3c6e_f372_fe94_f82b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MasterSeed(pub u64);

impl MasterSeed {
    /// Draws a seed from OS entropy.
    pub fn from_entropy() -> Self {
        MasterSeed(rand::random())
    }

    /// The stream for realization `index`. Depends only on its arguments.
    pub fn stream(self, index: u64, purpose: StreamPurpose) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0 ^ purpose.salt());
        rng.set_stream(index);
        rng
    }
}
