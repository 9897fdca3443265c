//! Challenge-guessing simulators for the zero-knowledge argument.
//!
//! The first simulator guesses the verifier's check index c up front,
//! commits to pads that are nonzero only on the checked support, and builds
//! its message-one state from the locally simulatable view alone: the
//! reduced witness state on S_c, padded with |0><0| elsewhere. If the
//! verifier then asks for a different check, the attempt aborts with a
//! fixed all-zeros record. The second simulator is identical except that it
//! sends the real witness state, which ties the two together through local
//! simulatability: no observable the verifier can produce distinguishes
//! them, since everything it measures lives on S_c or has been deleted.
//! The third simulator simply retries the second with fresh randomness
//! until an attempt survives, standing in for amplitude amplification at
//! desk scale, where auxiliary inputs are classical descriptions that can
//! be re-prepared at will.

use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::rng::{trial_rng, TrialRng};

use super::instance::Instance;
use super::messages::{JointOutcome, Transcript};
use super::run::{
    prover_commit_with_state, prover_respond, verifier_challenge, verifier_verify, RunParams,
};

/// Verifier behaviours a simulator can be pointed at. The honest verifier
/// follows the protocol exactly; its challenge is uniform and independent
/// of message one, which is what gives the simulators their 1/m survival
/// rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifierKind {
    Honest,
}

/// Retry budget multiplier: the third simulator defaults to 64 attempts per
/// check, making exhaustion odds below (1 - 1/m)^(64 m) < 2^-90.
pub const RETRIES_PER_CHECK: usize = 64;

/// The classical record one simulation attempt (or one real run) leaves
/// behind: everything the distinguisher is allowed to look at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimRecord {
    /// Did the challenge guess survive? Real runs are always `true`.
    pub non_abort: bool,
    /// The joint outcome, present on surviving attempts.
    pub outcome: Option<JointOutcome>,
    /// The check the verifier asked for.
    pub c: Option<usize>,
    /// Pad bits revealed by the openings, ascending over the support.
    pub opened_x: Option<Bits>,
    pub opened_z: Option<Bits>,
}

impl SimRecord {
    fn aborted() -> SimRecord {
        SimRecord { non_abort: false, outcome: None, c: None, opened_x: None, opened_z: None }
    }

    /// Category label for distribution comparisons. Aborts map to one fixed
    /// label (the simulator's fixed output state); surviving attempts whose
    /// prover rejected collapse to a second; the rest spell out the
    /// observables.
    pub fn observable_key(&self) -> String {
        if !self.non_abort {
            return "eta".into();
        }
        let outcome = self.outcome.expect("surviving records carry an outcome");
        if !outcome.prover_accepts {
            return "reject".into();
        }
        format!(
            "c={};x={};z={};v={}",
            self.c.expect("surviving records carry the challenge") + 1,
            self.opened_x.as_ref().expect("surviving records carry openings"),
            self.opened_z.as_ref().expect("surviving records carry openings"),
            u8::from(outcome.verifier_accepts == Some(true)),
        )
    }

    /// The same observables extracted from a real run's transcript.
    pub fn from_transcript(instance: &Instance, t: &Transcript) -> SimRecord {
        let support = instance.checks()[t.msg2.c].support();
        let positions: Vec<usize> = t.msg3.openings.iter().map(|(i, _, _)| *i).collect();
        debug_assert_eq!(positions, support);
        SimRecord {
            non_abort: true,
            outcome: Some(t.outcome),
            c: Some(t.msg2.c),
            opened_x: Some(t.opened_x.clone()),
            opened_z: Some(t.opened_z.clone()),
        }
    }
}

/// Which state the simulator sends as message one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SimState {
    /// Reduced witness on the guessed support, zero-padded elsewhere.
    LocalView,
    /// The full witness state.
    FullWitness,
}

fn simulate_attempt(
    instance: &Instance,
    params: &RunParams,
    verifier: VerifierKind,
    which: SimState,
    rng: &mut TrialRng,
) -> Result<SimRecord> {
    let VerifierKind::Honest = verifier;
    let n = instance.num_qubits();
    let guess = rng.random_range(0..instance.m());
    let support = instance.checks()[guess].support();
    // Pads vanish off the guessed support; only the on-support bits are
    // ever opened, so the rest need no cover.
    let mut x = Bits::zeros(n);
    let mut z = Bits::zeros(n);
    for &i in support {
        x.set(i, rng.random());
        z.set(i, rng.random());
    }
    let state = match which {
        SimState::LocalView => {
            instance.local_sim(support)?.embed_with_zeros(support, n)?
        }
        SimState::FullWitness => {
            instance.witness().ok_or(Error::MissingWitness)?.clone()
        }
    };
    let mut oracles = params.pad_commit.fresh_oracles(rng);
    let (msg1, pstate) =
        prover_commit_with_state(params, &state, x.clone(), z.clone(), &mut oracles, rng)?;
    let (msg2, vstate) = verifier_challenge(instance, msg1, rng)?;
    if msg2.c != guess {
        return Ok(SimRecord::aborted());
    }
    let (msg3, prover_accepts) = prover_respond(instance, &pstate, &msg2)?;
    let verdict = verifier_verify(instance, params, &mut oracles, vstate, &msg3, rng)?;
    Ok(SimRecord {
        non_abort: true,
        outcome: Some(JointOutcome::compose(prover_accepts, verdict)),
        c: Some(guess),
        opened_x: Some(x.select(support)),
        opened_z: Some(z.select(support)),
    })
}

/// One attempt of the witness-free simulator: guess the challenge, send the
/// locally simulatable view, abort on a wrong guess.
pub fn simulator_s1(
    instance: &Instance,
    params: &RunParams,
    verifier: VerifierKind,
    seed: u64,
) -> Result<SimRecord> {
    let mut rng = trial_rng(seed, 0);
    simulate_attempt(instance, params, verifier, SimState::LocalView, &mut rng)
}

/// One attempt of the bridging simulator: as `simulator_s1`, but sending
/// the full witness state.
pub fn simulator_s2(
    instance: &Instance,
    params: &RunParams,
    verifier: VerifierKind,
    seed: u64,
) -> Result<SimRecord> {
    let mut rng = trial_rng(seed, 0);
    simulate_attempt(instance, params, verifier, SimState::FullWitness, &mut rng)
}

/// Default retry budget for an instance.
pub fn default_retries(instance: &Instance) -> usize {
    RETRIES_PER_CHECK * instance.m()
}

/// Retry the bridging simulator with fresh randomness until an attempt
/// survives. Exhaustion is an explicit error, never a silent partial
/// output.
pub fn simulator_s3(
    instance: &Instance,
    params: &RunParams,
    verifier: VerifierKind,
    max_retries: usize,
    seed: u64,
) -> Result<SimRecord> {
    if max_retries == 0 {
        return Err(Error::InvalidParams("retry budget must be at least 1".into()));
    }
    let mut rng = trial_rng(seed, 0);
    for _ in 0..max_retries {
        let rec = simulate_attempt(instance, params, verifier, SimState::FullWitness, &mut rng)?;
        if rec.non_abort {
            return Ok(rec);
        }
    }
    Err(Error::RetriesExhausted(max_retries))
}
