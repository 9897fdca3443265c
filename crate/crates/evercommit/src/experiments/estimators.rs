//! Monte-Carlo estimators for the proof protocol: completeness and
//! soundness acceptance rates, and the zero-knowledge distance between real
//! and simulated transcript observables.

use serde::Serialize;

use super::run_trials;
use crate::error::{Error, Result};
use crate::protocol::{
    default_retries, run_protocol, simulator_s1, simulator_s2, simulator_s3, Instance,
    ProverKind, RunParams, SimRecord, VerifierKind,
};
use crate::rng::trial_seed;
use crate::stats::{counts_from_keys, tv_distance, tv_distance_corrected, RateEstimate};

fn check_nonzero(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParams("estimator needs at least one trial".into()));
    }
    Ok(())
}

/// Acceptance rate of the honest prover on a witnessed instance.
pub fn estimate_completeness(
    instance: &Instance,
    params: &RunParams,
    trials: u64,
    seed: u64,
) -> Result<RateEstimate> {
    estimate_soundness(instance, params, ProverKind::Honest, trials, seed)
}

/// Acceptance rate of the given prover; pair a no-instance with a cheater
/// kind to probe the soundness bound.
pub fn estimate_soundness(
    instance: &Instance,
    params: &RunParams,
    prover: ProverKind,
    trials: u64,
    seed: u64,
) -> Result<RateEstimate> {
    check_nonzero(trials)?;
    let accepts = run_trials(trials, |i| {
        let t = run_protocol(instance, params, prover, trial_seed(seed, i))?;
        Ok(t.outcome.accepted())
    })?;
    let successes = accepts.iter().filter(|&&a| a).count() as u64;
    Ok(RateEstimate::from_counts(trials, successes))
}

/// A total-variation estimate between two transcript-observable samples.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZkEstimate {
    /// Samples per side.
    pub samples: u64,
    /// Plug-in total-variation distance (biased upward by sampling noise).
    pub raw_tv: f64,
    /// The noise-corrected estimate: plug-in distance minus the split-half
    /// noise floor of the reference sample, clamped at zero.
    pub corrected_tv: f64,
}

fn tv_between(reference: &[String], comparison: &[String]) -> ZkEstimate {
    ZkEstimate {
        samples: reference.len() as u64,
        raw_tv: tv_distance(&counts_from_keys(reference), &counts_from_keys(comparison)),
        corrected_tv: tv_distance_corrected(reference, comparison),
    }
}

/// Zero-knowledge distance: real honest runs vs the retrying simulator,
/// compared on classical transcript observables (challenge, opened pad
/// bits, verdict). The comparison is an empirical check on those
/// projections, deliberately weaker than a statement about full quantum
/// output states.
pub fn estimate_zk_distance(
    instance: &Instance,
    params: &RunParams,
    verifier: VerifierKind,
    samples: u64,
    seed: u64,
) -> Result<ZkEstimate> {
    check_nonzero(samples)?;
    let real: Vec<String> = run_trials(samples, |i| {
        let t = run_protocol(instance, params, ProverKind::Honest, trial_seed(seed, 2 * i))?;
        Ok(SimRecord::from_transcript(instance, &t).observable_key())
    })?;
    let retries = default_retries(instance);
    let sim: Vec<String> = run_trials(samples, |i| {
        let rec = simulator_s3(instance, params, verifier, retries, trial_seed(seed, 2 * i + 1))?;
        Ok(rec.observable_key())
    })?;
    Ok(tv_between(&real, &sim))
}

/// Distance between the witness-free simulator and the witness-using one,
/// on full attempt records including aborts. Both draw the challenge guess
/// the same way, so the gap measures only how distinguishable the local
/// view is from the true witness on the opened support.
pub fn estimate_simulator_gap(
    instance: &Instance,
    params: &RunParams,
    verifier: VerifierKind,
    samples: u64,
    seed: u64,
) -> Result<ZkEstimate> {
    check_nonzero(samples)?;
    let s1: Vec<String> = run_trials(samples, |i| {
        Ok(simulator_s1(instance, params, verifier, trial_seed(seed, 2 * i))?.observable_key())
    })?;
    let s2: Vec<String> = run_trials(samples, |i| {
        Ok(simulator_s2(instance, params, verifier, trial_seed(seed, 2 * i + 1))?.observable_key())
    })?;
    Ok(tv_between(&s1, &s2))
}
