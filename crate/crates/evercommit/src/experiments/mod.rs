//! Executable security games and protocol estimators.
//!
//! The games pit the commitment and encryption schemes against a library of
//! named adversary strategies and report empirical distinguishing
//! advantages with honest error bars; the estimators Monte-Carlo the proof
//! protocol's completeness, soundness, and zero-knowledge distance.
//!
//! Two scope caveats apply everywhere here and are worth stating once:
//!
//! * **Games refute, they never prove.** An empirical game validates the
//!   scheme against the strategies it actually ran; a passing suite says
//!   nothing about adversaries outside the library.
//! * **"Unbounded" means exhaustive at desk scale.** The unbounded phases
//!   are realized as brute-force sweeps over configured spaces (capped at
//!   2^24 openings); the gap between that and true unboundedness is a
//!   documented limitation, not a bridged one.
//!
//! Every entry point takes a master seed. Trial `i` draws from the derived
//! stream `trial_rng(seed, i)`, trials run in parallel on the ambient rayon
//! pool, and aggregation is order-independent, so results are bit-exact
//! functions of their arguments regardless of thread count.

pub mod estimators;
pub mod games;
pub mod strategy;

pub use estimators::{
    estimate_completeness, estimate_simulator_gap, estimate_soundness, estimate_zk_distance,
    ZkEstimate,
};
pub use games::{
    aggregate_outcomes, exp_bit_ever_hide, exp_bit_ever_hide_outcomes, exp_c_hide,
    exp_c_hide_outcomes, exp_ever_hide, exp_ever_hide_outcomes, exp_otcd, exp_otcd_outcomes,
    exp_unpre, GameOutcome, HybridMode, MIN_TRIALS,
};
pub use strategy::Strategy;

/// Run `trials` independent rounds in parallel, short-circuiting on the
/// first error. The output vector is indexed by trial, so callers see the
/// same ordering a serial loop would produce.
pub(crate) fn run_trials<T, F>(trials: u64, per_trial: F) -> crate::error::Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> crate::error::Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..trials).into_par_iter().map(per_trial).collect()
}
