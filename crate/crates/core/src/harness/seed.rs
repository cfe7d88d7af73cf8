//! Seed derivation.
//!
//! Trial `i` of a run with seed `s` uses `splitmix64(s + i)` (wrapping). Each
//! trial splits into independent ChaCha8 streams keyed by purpose, so the
//! activity and jammer draws of a trial are shared by every algorithm.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// One step of the SplitMix64 generator.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    splitmix64(seed.wrapping_add(trial as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Activity = 1,
    Jammer = 2,
    Agent = 3,
    Equilibrium = 4,
}

/// `ChaCha8(splitmix64(base ^ tag·φ))` where φ is the 64-bit golden ratio.
pub fn stream_rng(base: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(base ^ (stream as u64).wrapping_mul(GOLDEN)))
}
