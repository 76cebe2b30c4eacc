//! Counter-based seed derivation.
//!
//! Every random stream in the crate is a ChaCha8 generator seeded with
//! `split_seed(master, stream, index)`. The function mixes its three inputs
//! through SplitMix64 finalizers, so child seeds depend only on their
//! coordinates and not on the order in which they are requested.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX2: u64 = 0x94D0_49BB_1331_11EB;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(MIX1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX2);
    z ^ (z >> 31)
}

/// Child seed for item `index` of stream `stream` under `master`.
pub fn split_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index)
}

/// Named streams used by the library and the CLI.
pub mod streams {
    pub const ERROR_MODEL: u64 = 1;
    pub const GRAPH: u64 = 2;
    pub const QAOA_ANGLES: u64 = 3;
    pub const MIRROR: u64 = 4;
    pub const SHOTS: u64 = 5;
    pub const BOOTSTRAP: u64 = 6;
    pub const ROW: u64 = 7;
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
