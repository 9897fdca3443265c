//! The three-round protocol: masked witness, pad commitments, deletion
//! certificates, checked openings.
//!
//! Round trip:
//!
//! 1. the prover one-time-pads its witness with Pauli masks X^x Z^z and
//!    commits to every pad bit with a certified-deletion bit commitment;
//! 2. the verifier picks a check index c, deletes every pad commitment
//!    outside the check's support S_c, and returns the certificates;
//! 3. the prover accepts iff all certificates verify, and opens the pad
//!    bits on S_c; the verifier recovers them, unmasks S_c only, and runs
//!    the projective check.
//!
//! The joint outcome collapses to (reject, reject) whenever the prover
//! rejects a certificate, so a verifier that skipped its deletions gains
//! nothing: it never sees the opened state accepted into an outcome.
//!
//! Every run is driven by a single `u64` seed recorded in the transcript;
//! rerunning with that seed reproduces the run bit for bit.

use num_complex::Complex64;
use rand::Rng;

use crate::backend::{DenseState, PauliMask};
use crate::bits::Bits;
use crate::commitment::{
    ccd_cert, ccd_commit, ccd_del, ccd_verify, CcdCommitment, CcdDecommitment, CcdKey, CcdParams,
    OracleSet,
};
use crate::error::{Error, Result};
use crate::oracle::CommitParams;
use crate::rng::{trial_rng, trial_seed, TrialRng};
use crate::ske::SkeParams;

use super::instance::Instance;
use super::messages::{JointOutcome, Msg1, Msg2, Msg3, Transcript};

/// Protocol-level parameters: the bit-commitment widths used for pad bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RunParams {
    pub pad_commit: CcdParams,
}

impl RunParams {
    pub fn new(pad_commit: CcdParams) -> Result<Self> {
        if pad_commit.ske.msg_len != 1 {
            return Err(Error::InvalidParams(format!(
                "pad commitments carry single bits, msg_len={}",
                pad_commit.ske.msg_len
            )));
        }
        pad_commit.validate()?;
        Ok(RunParams { pad_commit })
    }
}

impl Default for RunParams {
    /// Single-bit commitments over 8-qubit registers with 16-bit openings.
    fn default() -> Self {
        RunParams {
            pad_commit: CcdParams {
                ske: SkeParams { msg_len: 1, mu: 8, mu_comp: 4, cert_threshold: 0 },
                commit: CommitParams { s: 16, t: 16 },
            },
        }
    }
}

/// Prover behaviours available to the runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProverKind {
    /// Uses the bundled witness.
    Honest,
    /// Uses the top eigenvector of the averaged check operator: the best
    /// possible cheating state, accepted with probability equal to the
    /// soundness bound.
    OptimalEigenvector,
    /// Runs honestly but on the maximally mixed state.
    WrongWitness,
    /// Commits honestly, then corrupts one opening in the response.
    DecommitLiar,
}

impl ProverKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "honest" => Ok(ProverKind::Honest),
            "optimal" | "optimal-eigenvector" => Ok(ProverKind::OptimalEigenvector),
            "wrong-witness" => Ok(ProverKind::WrongWitness),
            "decommit-liar" => Ok(ProverKind::DecommitLiar),
            _ => Err(Error::InvalidParams(format!(
                "unknown prover '{name}'; known: honest, optimal, wrong-witness, decommit-liar"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProverKind::Honest => "honest",
            ProverKind::OptimalEigenvector => "optimal",
            ProverKind::WrongWitness => "wrong-witness",
            ProverKind::DecommitLiar => "decommit-liar",
        }
    }
}

/// What the prover keeps after the commitment phase.
#[derive(Clone, Debug)]
pub struct ProverState {
    pub x: Bits,
    pub z: Bits,
    d_x: Vec<CcdDecommitment>,
    d_z: Vec<CcdDecommitment>,
    ck_x: Vec<CcdKey>,
    ck_z: Vec<CcdKey>,
}

/// What the verifier keeps after the challenge phase: the chosen check and
/// the still-intact commitments on its support.
#[derive(Debug)]
pub struct VerifierState {
    pub c: usize,
    masked_state: DenseState,
    kept: Vec<(usize, CcdCommitment, CcdCommitment)>,
}

/// Commitment phase with an explicit prover state and pads: the honest
/// entry point samples both, the simulators and tests force them.
pub fn prover_commit_with_state<R: Rng + ?Sized>(
    params: &RunParams,
    state: &DenseState,
    x: Bits,
    z: Bits,
    oracles: &mut OracleSet,
    rng: &mut R,
) -> Result<(Msg1, ProverState)> {
    let n = state.num_qubits();
    if x.len() != n || z.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len().min(z.len()) });
    }
    let masked_state = state.apply_pauli_mask(&PauliMask::new(x.clone(), z.clone()))?;
    let mut com_x = Vec::with_capacity(n);
    let mut com_z = Vec::with_capacity(n);
    let mut d_x = Vec::with_capacity(n);
    let mut d_z = Vec::with_capacity(n);
    let mut ck_x = Vec::with_capacity(n);
    let mut ck_z = Vec::with_capacity(n);
    for i in 0..n {
        let bit_x: Bits = [x.get(i)].into_iter().collect();
        let bit_z: Bits = [z.get(i)].into_iter().collect();
        let (com, d, ck) = ccd_commit(&params.pad_commit, oracles, &bit_x, rng)?;
        com_x.push(com);
        d_x.push(d);
        ck_x.push(ck);
        let (com, d, ck) = ccd_commit(&params.pad_commit, oracles, &bit_z, rng)?;
        com_z.push(com);
        d_z.push(d);
        ck_z.push(ck);
    }
    Ok((
        Msg1 { masked_state, com_x, com_z },
        ProverState { x, z, d_x, d_z, ck_x, ck_z },
    ))
}

/// Honest commitment phase: fresh uniform pads over the bundled witness.
pub fn prover_commit<R: Rng + ?Sized>(
    instance: &Instance,
    params: &RunParams,
    oracles: &mut OracleSet,
    rng: &mut R,
) -> Result<(Msg1, ProverState)> {
    let witness = instance.witness().ok_or(Error::MissingWitness)?.clone();
    let n = instance.num_qubits();
    let x = Bits::random(n, rng);
    let z = Bits::random(n, rng);
    prover_commit_with_state(params, &witness, x, z, oracles, rng)
}

/// Challenge phase. Takes Msg1 by value: the verifier now owns the quantum
/// parts, and deletes every pad commitment outside the chosen support.
pub fn verifier_challenge<R: Rng + ?Sized>(
    instance: &Instance,
    msg1: Msg1,
    rng: &mut R,
) -> Result<(Msg2, VerifierState)> {
    let n = instance.num_qubits();
    if msg1.com_x.len() != n || msg1.com_z.len() != n {
        return Err(Error::MalformedMessage(format!(
            "expected {n} pad commitments per string, got {} and {}",
            msg1.com_x.len(),
            msg1.com_z.len()
        )));
    }
    if msg1.masked_state.num_qubits() != n {
        return Err(Error::MalformedMessage(format!(
            "masked state has {} qubits, instance has {n}",
            msg1.masked_state.num_qubits()
        )));
    }
    let c = rng.random_range(0..instance.m());
    let support = instance.checks()[c].support();
    let mut certs = Vec::new();
    let mut kept = Vec::new();
    for (i, (mut com_x, mut com_z)) in
        msg1.com_x.into_iter().zip(msg1.com_z).enumerate()
    {
        if support.contains(&i) {
            kept.push((i, com_x, com_z));
        } else {
            let cert_x = ccd_del(&mut com_x, rng);
            let cert_z = ccd_del(&mut com_z, rng);
            certs.push((i, cert_x, cert_z));
        }
    }
    Ok((
        Msg2 { c, certs },
        VerifierState { c, masked_state: msg1.masked_state, kept },
    ))
}

/// Response phase: check every certificate against the retained keys and
/// open the pad bits on the checked support.
pub fn prover_respond(
    instance: &Instance,
    state: &ProverState,
    msg2: &Msg2,
) -> Result<(Msg3, bool)> {
    if msg2.c >= instance.m() {
        return Err(Error::MalformedMessage(format!(
            "challenge index {} out of range (m = {})",
            msg2.c,
            instance.m()
        )));
    }
    let support = instance.checks()[msg2.c].support();
    let expected: Vec<usize> =
        (0..instance.num_qubits()).filter(|i| !support.contains(i)).collect();
    let got: Vec<usize> = msg2.certs.iter().map(|(i, _, _)| *i).collect();
    if got != expected {
        return Err(Error::MalformedMessage(
            "certificate positions do not match the challenge complement".into(),
        ));
    }
    let mut accepts = true;
    for (i, cert_x, cert_z) in &msg2.certs {
        accepts &= ccd_cert(cert_x, &state.ck_x[*i])?;
        accepts &= ccd_cert(cert_z, &state.ck_z[*i])?;
    }
    let openings = support
        .iter()
        .map(|&i| (i, state.d_x[i].clone(), state.d_z[i].clone()))
        .collect();
    Ok((Msg3 { openings }, accepts))
}

/// Final phase: recover the pad bits on the support, unmask exactly there,
/// and run the projective check. Any failed opening rejects outright.
pub fn verifier_verify<R: Rng + ?Sized>(
    instance: &Instance,
    params: &RunParams,
    oracles: &mut OracleSet,
    state: VerifierState,
    msg3: &Msg3,
    rng: &mut R,
) -> Result<bool> {
    let check = &instance.checks()[state.c];
    let got: Vec<usize> = msg3.openings.iter().map(|(i, _, _)| *i).collect();
    if got != check.support() {
        return Err(Error::MalformedMessage(
            "opening positions do not match the checked support".into(),
        ));
    }
    let n = instance.num_qubits();
    let mut x = Bits::zeros(n);
    let mut z = Bits::zeros(n);
    let mut kept = state.kept;
    for ((i, d_x, d_z), (kept_i, com_x, com_z)) in msg3.openings.iter().zip(kept.iter_mut()) {
        debug_assert_eq!(i, kept_i);
        let bit_x = match ccd_verify(&params.pad_commit, oracles, com_x, d_x, rng)? {
            Some(bits) => bits.get(0),
            None => return Ok(false),
        };
        let bit_z = match ccd_verify(&params.pad_commit, oracles, com_z, d_z, rng)? {
            Some(bits) => bits.get(0),
            None => return Ok(false),
        };
        x.set(*i, bit_x);
        z.set(*i, bit_z);
    }
    // Unmask the support only; residual masks elsewhere commute with the
    // check and cannot change its statistics.
    let unmasked = state.masked_state.apply_pauli_mask(&PauliMask::new(x, z))?;
    let (accept, _post) = check.measure(&unmasked, rng)?;
    Ok(accept)
}

/// The prover state a given behaviour plays with.
fn prover_initial_state(instance: &Instance, prover: ProverKind) -> Result<DenseState> {
    match prover {
        ProverKind::Honest | ProverKind::DecommitLiar => {
            Ok(instance.witness().ok_or(Error::MissingWitness)?.clone())
        }
        ProverKind::WrongWitness => DenseState::maximally_mixed(instance.num_qubits()),
        ProverKind::OptimalEigenvector => top_eigenvector_state(instance),
    }
}

/// Pure state along the top eigenvector of the averaged check operator.
fn top_eigenvector_state(instance: &Instance) -> Result<DenseState> {
    let eig = instance.averaged_check_operator()?.symmetric_eigen();
    let best = (0..eig.eigenvalues.len())
        .max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .expect("operator has at least one eigenvalue");
    let column: Vec<Complex64> = eig.eigenvectors.column(best).iter().copied().collect();
    DenseState::pure(instance.num_qubits(), &column)
}

/// One full run, reproducible from the seed alone.
pub fn run_protocol(
    instance: &Instance,
    params: &RunParams,
    prover: ProverKind,
    seed: u64,
) -> Result<Transcript> {
    let mut rng = trial_rng(seed, 0);
    let state = prover_initial_state(instance, prover)?;
    let mut oracles = params.pad_commit.fresh_oracles(&mut rng);
    let n = instance.num_qubits();
    let x = Bits::random(n, &mut rng);
    let z = Bits::random(n, &mut rng);
    let (msg1, pstate) =
        prover_commit_with_state(params, &state, x, z, &mut oracles, &mut rng)?;
    let msg1_snapshot = msg1.clone();
    let (msg2, vstate) = verifier_challenge(instance, msg1, &mut rng)?;
    let (mut msg3, prover_accepts) = prover_respond(instance, &pstate, &msg2)?;
    if prover == ProverKind::DecommitLiar {
        let (_, d_x, _) = &mut msg3.openings[0];
        d_x.d1.set(0, !d_x.d1.get(0));
    }
    let verdict = verifier_verify(instance, params, &mut oracles, vstate, &msg3, &mut rng)?;
    let support = instance.checks()[msg2.c].support();
    Ok(Transcript {
        opened_x: pstate.x.select(support),
        opened_z: pstate.z.select(support),
        msg1: msg1_snapshot,
        msg2,
        msg3,
        outcome: JointOutcome::compose(prover_accepts, verdict),
        verifier_verdict: verdict,
        seed,
    })
}

/// N independent sequential rounds; the aggregate accepts only if every
/// round does, on both sides.
pub fn run_sequential(
    instance: &Instance,
    params: &RunParams,
    prover: ProverKind,
    rounds: usize,
    seed: u64,
) -> Result<(Vec<Transcript>, JointOutcome)> {
    if rounds == 0 {
        return Err(Error::InvalidParams("sequential repetition needs at least one round".into()));
    }
    let mut transcripts = Vec::with_capacity(rounds);
    let mut prover_accepts = true;
    let mut verdicts = true;
    for round in 0..rounds {
        let t = run_protocol(instance, params, prover, trial_seed(seed, round as u64))?;
        prover_accepts &= t.outcome.prover_accepts;
        verdicts &= t.verifier_verdict;
        transcripts.push(t);
    }
    Ok((transcripts, JointOutcome::compose(prover_accepts, verdicts)))
}

/// Convenience for tests and estimators: a run's RNG, derived the same way
/// `run_protocol` derives it.
pub fn run_rng(seed: u64) -> TrialRng {
    trial_rng(seed, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::instance::InstanceKind;

    #[test]
    fn honest_ghz_runs_accept() {
        let instance = Instance::ghz3();
        let params = RunParams::default();
        for seed in 0..30 {
            let t = run_protocol(&instance, &params, ProverKind::Honest, seed).unwrap();
            assert!(t.outcome.prover_accepts, "seed {seed}");
            assert_eq!(t.outcome.verifier_accepts, Some(true), "seed {seed}");
        }
    }

    #[test]
    fn zero_pads_leave_the_witness_unmasked() {
        let instance = Instance::ghz3();
        let params = RunParams::default();
        let mut rng = trial_rng(40, 0);
        let mut oracles = params.pad_commit.fresh_oracles(&mut rng);
        let witness = instance.witness().unwrap();
        let (msg1, _state) = prover_commit_with_state(
            &params,
            witness,
            Bits::zeros(3),
            Bits::zeros(3),
            &mut oracles,
            &mut rng,
        )
        .unwrap();
        assert!(msg1.masked_state.trace_distance(witness).unwrap() < 1e-12);
        assert_eq!(msg1.com_x.len(), 3);
        assert_eq!(msg1.com_z.len(), 3);
    }

    #[test]
    fn unmasking_restores_check_certainty() {
        let instance = Instance::ghz3();
        let witness = instance.witness().unwrap();
        let mut rng = trial_rng(41, 0);
        let x = Bits::random(3, &mut rng);
        let z = Bits::random(3, &mut rng);
        let mask = PauliMask::new(x, z);
        let masked = witness.apply_pauli_mask(&mask).unwrap();
        let unmasked = masked.apply_pauli_mask(&mask).unwrap();
        for check in instance.checks() {
            let p = check.prob(&unmasked).unwrap();
            assert!((p - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn missing_witness_fails_the_honest_prover() {
        let instance = Instance::frustrated3();
        let params = RunParams::default();
        assert!(matches!(
            run_protocol(&instance, &params, ProverKind::Honest, 7),
            Err(Error::MissingWitness)
        ));
    }

    #[test]
    fn decommit_liar_is_rejected() {
        let instance = Instance::ghz3();
        let params = RunParams::default();
        for seed in 0..20 {
            let t = run_protocol(&instance, &params, ProverKind::DecommitLiar, seed).unwrap();
            assert!(!t.verifier_verdict, "seed {seed}");
        }
    }

    #[test]
    fn sequential_aggregates_by_conjunction() {
        let instance = Instance::ghz3();
        let params = RunParams::default();
        let (ts, agg) = run_sequential(&instance, &params, ProverKind::Honest, 5, 99).unwrap();
        assert_eq!(ts.len(), 5);
        assert!(agg.accepted());
        let single = run_protocol(&instance, &params, ProverKind::Honest, trial_seed(99, 0))
            .unwrap();
        assert_eq!(single.outcome, ts[0].outcome);
        assert_eq!(single.seed, ts[0].seed);
    }

    #[test]
    fn optimal_cheater_exists_for_no_instances() {
        let instance = Instance::frustrated3();
        assert_eq!(instance.kind(), InstanceKind::No);
        let state = super::top_eigenvector_state(&instance).unwrap();
        // The state's average acceptance equals the soundness bound.
        let mut acc = 0.0;
        for check in instance.checks() {
            acc += check.prob(&state).unwrap();
        }
        acc /= instance.m() as f64;
        assert!((acc - instance.soundness_bound().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn transcripts_reproduce_from_their_seed() {
        let instance = Instance::ghz3();
        let params = RunParams::default();
        let a = run_protocol(&instance, &params, ProverKind::Honest, 1234).unwrap();
        let b = run_protocol(&instance, &params, ProverKind::Honest, 1234).unwrap();
        assert_eq!(
            serde_json::to_string(&a.to_wire()).unwrap(),
            serde_json::to_string(&b.to_wire()).unwrap()
        );
    }
}
