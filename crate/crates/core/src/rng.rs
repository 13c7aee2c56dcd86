//! Seed handling.
//!
//! Every random draw in the crate is a pure function of a [`RandomSeed`] and a
//! key describing *what* is being drawn (a graph row, a vertex label, a path
//! step). Draws are therefore independent of scheduling: trials and rows can be
//! evaluated on any thread in any order and still reproduce bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A `(seed, stream)` pair. Streams separate trials that share a base seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSeed {
    pub seed: u64,
    pub stream: u64,
}

/// Independent random purposes. Each gets its own key space so that, e.g.,
/// vertex labels never correlate with graph edges drawn under the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum Domain {
    GraphRow = 1,
    Label = 2,
    PathStep = 3,
    Subset = 4,
    GaltonWatson = 5,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomSeed {
    pub const fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// The same base seed on another stream.
    pub const fn with_stream(self, stream: u64) -> Self {
        Self {
            seed: self.seed,
            stream,
        }
    }

    /// Stream `self.stream + offset`, used to give every trial of an
    /// experiment its own substream.
    pub const fn offset(self, offset: u64) -> Self {
        Self {
            seed: self.seed,
            stream: self.stream.wrapping_add(offset),
        }
    }

    /// 64 hashed bits for `(domain, index)`.
    #[inline]
    pub(crate) fn key(self, domain: Domain, index: u64) -> u64 {
        let mut h = mix(self.seed.wrapping_add(GOLDEN));
        h = mix(h ^ self.stream.wrapping_mul(GOLDEN).wrapping_add(0x632B_E59B_D9B4_E019));
        h = mix(h ^ (domain as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93));
        mix(h ^ index.wrapping_mul(GOLDEN).wrapping_add(0x2545_F491_4F6C_DD1D))
    }

    /// A uniform draw in `[0, 1)` for `(domain, index)`, 53 bits of precision.
    #[inline]
    pub(crate) fn uniform(self, domain: Domain, index: u64) -> f64 {
        (self.key(domain, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// A fresh generator for `(domain, index)`.
    pub(crate) fn rng(self, domain: Domain, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key(domain, index))
    }
}

impl From<u64> for RandomSeed {
    fn from(seed: u64) -> Self {
        Self::new(seed, 0)
    }
}
