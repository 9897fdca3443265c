//! The executable security games.
//!
//! Each game runs `trials` independent rounds. Round `i` draws every random
//! choice from `trial_rng(seed, i)`, so results are bit-exact functions of
//! (seed, trials, strategy, params) and rounds can execute on any number of
//! threads without changing the aggregate.

use rand::Rng;

use super::strategy::Strategy;
use super::run_trials;
use crate::bits::Bits;
use crate::commitment::{ccd_cert, ccd_commit, CcdParams};
use crate::error::{Error, Result};
use crate::oracle::{commit_classical, CommitParams};
use crate::rng::trial_rng;
use crate::ske::{DeletionCert, SkeParams, SkeSecretKey};
use crate::stats::{AdvantageEstimate, ArmCounts, Conditioning, RateEstimate};
use serde::{Deserialize, Serialize};

/// Fewest trials a game accepts; below this the normal-approximation error
/// bars stop being meaningful.
pub const MIN_TRIALS: u64 = 100;

/// One round of a distinguishing game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GameOutcome {
    /// The challenge bit the round was played with.
    pub b: bool,
    /// Whether the deletion certificate (joint, in the multi-commitment
    /// game) was accepted. Games without a certificate phase record `true`.
    pub accepted_cert: bool,
    /// The adversary's guess; `None` is the withheld-output branch taken
    /// when the certificate is rejected.
    pub guess: Option<bool>,
}

/// Which stage of the oracle-reprogramming argument a hiding game runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HybridMode {
    /// The unmodified game: the mask is the oracle's value at the committed
    /// point.
    Real,
    /// The oracle is reprogrammed at the committed point to a fresh value
    /// after the mask is computed; the adversary only ever sees the
    /// reprogrammed view.
    Hyb1,
    /// The mask is drawn uniformly and the oracle is patched at the
    /// committed point to keep the revealed view consistent.
    Hyb2,
}

impl HybridMode {
    /// Parse a mode name as used on the command line.
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "real" => Some(HybridMode::Real),
            "hyb1" => Some(HybridMode::Hyb1),
            "hyb2" => Some(HybridMode::Hyb2),
            _ => None,
        }
    }

    /// Stable lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            HybridMode::Real => "real",
            HybridMode::Hyb1 => "hyb1",
            HybridMode::Hyb2 => "hyb2",
        }
    }
}

/// Fold per-round outcomes into an advantage estimate under the given
/// conditioning. Order-independent: any permutation of `outcomes` yields the
/// same estimate.
pub fn aggregate_outcomes(
    outcomes: &[GameOutcome],
    conditioning: Conditioning,
) -> AdvantageEstimate {
    let mut counts = ArmCounts::default();
    for o in outcomes {
        match conditioning {
            Conditioning::None => counts.record(o.b, o.guess == Some(true)),
            Conditioning::CertAccepted => {
                if o.accepted_cert {
                    counts.record(o.b, o.guess == Some(true));
                }
            }
        }
    }
    AdvantageEstimate::from_counts(outcomes.len() as u64, counts, conditioning)
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParams(format!(
            "games need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    Ok(())
}

/// A certificate is accepted when it has the right width and passes the
/// key's record check. Malformed or withheld certificates count as rejected.
fn cert_gate(cert: &Option<DeletionCert>, width: usize, check: impl FnOnce(&DeletionCert) -> bool) -> bool {
    match cert {
        Some(c) if c.outcomes.len() == width => check(c),
        _ => false,
    }
}

/// Per-round outcomes of the one-time certified-deletion game for the
/// encryption scheme. Round structure: draw the challenge bit, encrypt the
/// chosen message under a fresh one-time key, let the adversary act on the
/// ciphertext and submit a certificate, verify it, and — only on acceptance
/// — reveal the secret key for the final guess.
pub fn exp_otcd_outcomes(
    strategy: &Strategy,
    params: SkeParams,
    trials: u64,
    seed: u64,
) -> Result<Vec<GameOutcome>> {
    strategy.validate()?;
    params.validate()?;
    check_trials(trials)?;
    run_trials(trials, |i| {
        let mut rng = trial_rng(seed, i);
        let b: bool = rng.random();
        let (m0, m1) = strategy.choose_messages(params.msg_len);
        let mut sk = SkeSecretKey::generate(params, &mut rng)?;
        let mut ct = sk.encrypt(if b { &m1 } else { &m0 }, &mut rng)?;
        let cert = strategy.certificate(&mut ct.quantum, &mut rng);
        let accepted = cert_gate(&cert, params.mu, |c| {
            sk.verify_cert(c).expect("key has an encryption record")
        });
        // On acceptance the challenger hands over sk; the built-in guessers
        // do not consult it (see the strategy module docs).
        let guess = accepted.then(|| strategy.final_guess(&mut rng));
        Ok(GameOutcome { b, accepted_cert: accepted, guess })
    })
}

/// The one-time certified-deletion game, aggregated with cert conditioning.
pub fn exp_otcd(
    strategy: &Strategy,
    params: SkeParams,
    trials: u64,
    seed: u64,
) -> Result<AdvantageEstimate> {
    Ok(aggregate_outcomes(
        &exp_otcd_outcomes(strategy, params, trials, seed)?,
        Conditioning::CertAccepted,
    ))
}

/// Per-round outcomes of the certified-everlasting-hiding game for the
/// commitment. Round structure: commit to the chosen message, optionally
/// rewire the mask oracle per `mode`, let the adversary act on the
/// commitment and submit a certificate, and on acceptance reveal the full
/// decommitment and key for the final guess.
pub fn exp_ever_hide_outcomes(
    strategy: &Strategy,
    params: &CcdParams,
    trials: u64,
    seed: u64,
    mode: HybridMode,
) -> Result<Vec<GameOutcome>> {
    strategy.validate()?;
    params.validate()?;
    check_trials(trials)?;
    run_trials(trials, |i| {
        let mut rng = trial_rng(seed, i);
        let mut oracles = params.fresh_oracles(&mut rng);
        let b: bool = rng.random();
        let (m0, m1) = strategy.choose_messages(params.ske.msg_len);
        let (mut com, d, ck) =
            ccd_commit(params, &mut oracles, if b { &m1 } else { &m0 }, &mut rng)?;
        match mode {
            HybridMode::Real => {}
            HybridMode::Hyb1 => {
                // The mask was computed from the base oracle value during
                // the commit; from here on the adversary sees a fresh value
                // at the committed point.
                let fresh = Bits::random(params.mask_len(), &mut rng);
                oracles.h.reprogram(d.d1.clone(), fresh)?;
            }
            HybridMode::Hyb2 => {
                // Uniform mask, with the oracle patched at the committed
                // point so the revealed (d, ck) still checks out.
                let h = Bits::random(params.mask_len(), &mut rng);
                oracles.h.reprogram(d.d1.clone(), h.xor(&ck.masked_bits()))?;
                com.h = h;
            }
        }
        let cert = strategy.certificate(&mut com.ske_ct.quantum, &mut rng);
        let accepted = cert_gate(&cert, params.ske.mu, |c| {
            ccd_cert(c, &ck).expect("key has an encryption record")
        });
        // On acceptance the challenger reveals (d, ck); the built-in
        // guessers do not consult them (see the strategy module docs).
        let guess = accepted.then(|| strategy.final_guess(&mut rng));
        Ok(GameOutcome { b, accepted_cert: accepted, guess })
    })
}

/// The certified-everlasting-hiding game, aggregated with cert conditioning.
pub fn exp_ever_hide(
    strategy: &Strategy,
    params: &CcdParams,
    trials: u64,
    seed: u64,
    mode: HybridMode,
) -> Result<AdvantageEstimate> {
    Ok(aggregate_outcomes(
        &exp_ever_hide_outcomes(strategy, params, trials, seed, mode)?,
        Conditioning::CertAccepted,
    ))
}

/// Per-round outcomes of the computational-hiding game: no certificate
/// phase, the register stays intact, and the adversary guesses directly
/// from the commitment and oracle access.
pub fn exp_c_hide_outcomes(
    strategy: &Strategy,
    params: &CcdParams,
    trials: u64,
    seed: u64,
) -> Result<Vec<GameOutcome>> {
    strategy.validate()?;
    params.validate()?;
    check_trials(trials)?;
    run_trials(trials, |i| {
        let mut rng = trial_rng(seed, i);
        let mut oracles = params.fresh_oracles(&mut rng);
        let b: bool = rng.random();
        let (m0, m1) = strategy.choose_messages(params.ske.msg_len);
        let (mut com, _d, _ck) =
            ccd_commit(params, &mut oracles, if b { &m1 } else { &m0 }, &mut rng)?;
        let guess =
            strategy.computational_guess(params, &mut oracles, &mut com, &m0, &m1, &mut rng);
        Ok(GameOutcome { b, accepted_cert: true, guess: Some(guess) })
    })
}

/// The computational-hiding game, aggregated without conditioning.
pub fn exp_c_hide(
    strategy: &Strategy,
    params: &CcdParams,
    trials: u64,
    seed: u64,
) -> Result<AdvantageEstimate> {
    Ok(aggregate_outcomes(
        &exp_c_hide_outcomes(strategy, params, trials, seed)?,
        Conditioning::None,
    ))
}

/// The unpredictability game for the classical commitment: the challenger
/// publishes f and the adversary must name the committed value exactly.
pub fn exp_unpre(
    strategy: &Strategy,
    params: CommitParams,
    trials: u64,
    seed: u64,
) -> Result<RateEstimate> {
    strategy.validate()?;
    check_trials(trials)?;
    let wins = run_trials(trials, |i| {
        let mut rng = trial_rng(seed, i);
        let mut oracle = params.fresh_oracle(&mut rng);
        let r = Bits::random(params.s, &mut rng);
        let rp = Bits::random(params.t, &mut rng);
        let f = commit_classical(&mut oracle, &params, &r, &rp)?;
        let answer = strategy.unpredictability_answer(&mut oracle, &params, &f, &mut rng);
        Ok(answer == Some(r))
    })?;
    let successes = wins.iter().filter(|&&w| w).count() as u64;
    Ok(RateEstimate::from_counts(trials, successes))
}

/// Per-round outcomes of the multi-commitment hiding game: the challenger
/// commits bit-by-bit to an n-bit message, the adversary submits one
/// certificate per commitment, and the joint output is accepted only when
/// every certificate checks. On joint acceptance all decommitments and keys
/// are revealed for the final guess.
pub fn exp_bit_ever_hide_outcomes(
    strategy: &Strategy,
    n: usize,
    params: &CcdParams,
    trials: u64,
    seed: u64,
) -> Result<Vec<GameOutcome>> {
    strategy.validate()?;
    params.validate()?;
    check_trials(trials)?;
    if params.ske.msg_len != 1 {
        return Err(Error::InvalidParams(format!(
            "the multi-commitment game commits bit-by-bit, msg_len={}",
            params.ske.msg_len
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParams("need at least one commitment".into()));
    }
    run_trials(trials, |i| {
        let mut rng = trial_rng(seed, i);
        // One oracle set serves all n commitments of a round.
        let mut oracles = params.fresh_oracles(&mut rng);
        let b: bool = rng.random();
        let (m0, m1) = strategy.choose_messages(n);
        let msg = if b { &m1 } else { &m0 };
        let mut all_accepted = true;
        for j in 0..n {
            let bit: Bits = std::iter::once(msg.get(j)).collect();
            let (mut com, _d, ck) = ccd_commit(params, &mut oracles, &bit, &mut rng)?;
            let cert = strategy.certificate_at(j, &mut com.ske_ct.quantum, &mut rng);
            let ok = cert_gate(&cert, params.ske.mu, |c| {
                ccd_cert(c, &ck).expect("key has an encryption record")
            });
            all_accepted &= ok;
        }
        let guess = all_accepted.then(|| strategy.final_guess(&mut rng));
        Ok(GameOutcome { b, accepted_cert: all_accepted, guess })
    })
}

/// The multi-commitment hiding game, aggregated with joint-cert conditioning.
pub fn exp_bit_ever_hide(
    strategy: &Strategy,
    n: usize,
    params: &CcdParams,
    trials: u64,
    seed: u64,
) -> Result<AdvantageEstimate> {
    Ok(aggregate_outcomes(
        &exp_bit_ever_hide_outcomes(strategy, n, params, trials, seed)?,
        Conditioning::CertAccepted,
    ))
}
