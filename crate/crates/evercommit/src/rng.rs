//! Deterministic randomness plumbing.
//!
//! One master seed reproduces an entire experiment. Each trial derives its
//! own stream seed as
//!
//! ```text
//! trial_seed(master, i) = splitmix64(master XOR (i + 1) * 0x9E3779B97F4A7C15)
//! ```
//!
//! (one SplitMix64 output step applied to the xored state), and runs on a
//! ChaCha8 stream seeded with that value. Trials therefore consume
//! independent streams regardless of execution order, so a run parallelised
//! over any number of jobs aggregates to exactly the same result as a serial
//! run. Random oracles draw their own sub-stream seed from the trial stream
//! at construction time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The stream type used everywhere randomness is consumed.
pub type TrialRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 step: advances `state` and returns the mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut s = master ^ index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA);
    splitmix64(&mut s)
}

/// Fresh stream for trial `index` under `master`.
pub fn trial_rng(master: u64, index: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, index))
}

/// Fresh sub-stream forked off an existing stream (used by random oracles so
/// their lazy sampling cannot interleave with the caller's draws).
pub fn fork_rng<R: Rng + ?Sized>(rng: &mut R) -> TrialRng {
    ChaCha8Rng::seed_from_u64(rng.random())
}
