//! Seed derivation.
//!
//! Everything random in a run descends from one `u64` seed. Child seeds are
//! derived with [`derive_seed`]:
//!
//! ```text
//! z     = splitmix64(parent XOR (stream.tag() * 0x9E3779B97F4A7C15))
//! child = splitmix64(z + counter)
//! ```
//!
//! A protocol run seeded with `s` gives each party its own stream
//! (`derive_seed(s, Stream::Alice, 0)`, and so on) and samples Born-rule
//! outcomes from `Stream::Nature`. Monte Carlo trial `i` under root seed `r`
//! runs with seed `derive_seed(r, Stream::Trial, i)`, so any single trial can
//! be replayed on its own.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Alice,
    Bob,
    Tp,
    Nature,
    Adversary,
    Secrets,
    Trial,
}

impl Stream {
    pub const fn tag(self) -> u64 {
        match self {
            Stream::Alice => 1,
            Stream::Bob => 2,
            Stream::Tp => 3,
            Stream::Nature => 4,
            Stream::Adversary => 5,
            Stream::Secrets => 6,
            Stream::Trial => 7,
        }
    }
}

pub const fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub const fn derive_seed(parent: u64, stream: Stream, counter: u64) -> u64 {
    let z = splitmix64(parent ^ stream.tag().wrapping_mul(0x9E37_79B9_7F4A_7C15));
    splitmix64(z.wrapping_add(counter))
}

pub fn stream_rng(parent: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(parent, stream, 0))
}

/// Seed of Monte Carlo trial `index` under `root`.
pub const fn trial_seed(root: u64, index: u64) -> u64 {
    derive_seed(root, Stream::Trial, index)
}
