//! Seeded, splittable randomness.
//!
//! Every random quantity in the crate is drawn from a [`RngSeed`] that was
//! derived from a master seed and a list of integer stream labels, so a run
//! is a pure function of its master seed regardless of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The generator behind every [`RngSeed`].
pub type SampleRng = ChaCha8Rng;

/// A 64-bit seed that can be split into independent labelled substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub const fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub const fn value(self) -> u64 {
        self.0
    }

    /// Derives the seed of the substream identified by `labels`.
    ///
    /// Identical `(seed, labels)` always give the same substream; changing any
    /// label gives an unrelated one.
    pub fn substream(self, labels: &[u64]) -> RngSeed {
        let mut state = mix(self.0 ^ 0x6a09_e667_f3bc_c908);
        for (position, &label) in labels.iter().enumerate() {
            state = mix(state ^ mix(label.wrapping_add(position as u64).wrapping_add(0x9e37_79b9_7f4a_7c15)));
        }
        RngSeed(state)
    }

    pub fn rng(self) -> SampleRng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        Self(seed)
    }
}

// splitmix64 finalizer
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
