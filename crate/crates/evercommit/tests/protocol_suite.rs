//! Integration checks for the three-message proof protocol: message-level
//! tampering, challenge statistics, sequential repetition, and the wire
//! format of emitted transcripts.

mod common;

use common::*;
use evercommit::protocol::{
    prover_commit, prover_respond, run_protocol, run_sequential, verifier_challenge, Instance,
    ProverKind, RunParams,
};
use evercommit::{trial_rng, Bits, DeletionCert};

#[test]
fn substituted_certificate_makes_the_prover_reject() {
    // Replace one off-support deletion certificate with uniform bits: the
    // prover should output the reject flag unless the forgery happens to
    // match the four conjugate-coded positions (probability 1/16).
    let instance = Instance::ghz3();
    let params = RunParams::default();
    let mut counted = 0u64;
    let mut rejects = 0u64;
    for i in 0..3000u64 {
        let mut rng = trial_rng(1201, i);
        let mut oracles = params.pad_commit.fresh_oracles(&mut rng);
        let (msg1, pstate) = prover_commit(&instance, &params, &mut oracles, &mut rng).unwrap();
        let (mut msg2, _vstate) = verifier_challenge(&instance, msg1, &mut rng).unwrap();
        if msg2.certs.is_empty() {
            // The full-support check deletes nothing; nothing to forge.
            continue;
        }
        let width = params.pad_commit.ske.mu;
        let forged = DeletionCert { outcomes: Bits::random(width, &mut rng) };
        msg2.certs[0].1 = forged;
        let (_msg3, prover_accepts) = prover_respond(&instance, &pstate, &msg2).unwrap();
        counted += 1;
        rejects += u64::from(!prover_accepts);
    }
    assert!(counted > 1500, "too few trials carried certificates: {counted}");
    let rate = rejects as f64 / counted as f64;
    let expect = 1.0 - 0.0625;
    let sigma = binomial_sigma(expect, counted);
    assert!(
        (rate - expect).abs() < 4.0 * sigma,
        "prover reject rate {rate}, expected about {expect}"
    );
}

#[test]
fn challenge_choice_is_uniform() {
    let instance = Instance::ghz3();
    let params = RunParams::default();
    let mut counts = [0u64; 3];
    for i in 0..3000u64 {
        let t = run_protocol(&instance, &params, ProverKind::Honest, ref_trial_seed(1301, i))
            .unwrap();
        counts[t.msg2.c] += 1;
    }
    let stat = chi2_uniform_stat(&counts);
    assert!(stat < CHI2_999_DOF2, "chi-squared statistic {stat}, counts {counts:?}");
}

#[test]
fn ten_round_sequential_yes_instance_always_accepts() {
    let instance = Instance::ghz3();
    let params = RunParams::default();
    let trials = 1000u64;
    let mut accepted = 0u64;
    for i in 0..trials {
        let (_transcripts, joint) =
            run_sequential(&instance, &params, ProverKind::Honest, 10, ref_trial_seed(1401, i))
                .unwrap();
        accepted += u64::from(joint.accepted());
    }
    let rate = accepted as f64 / trials as f64;
    assert!(rate >= 0.99, "aggregate acceptance {rate}");
}

#[test]
fn wrong_witness_cheater_is_caught_often() {
    // A prover holding the maximally mixed state instead of the witness
    // passes each projective check with probability 1/2 on this instance.
    let instance = Instance::ghz3();
    let params = RunParams::default();
    let trials = 400u64;
    let mut accepted = 0u64;
    for i in 0..trials {
        let t = run_protocol(&instance, &params, ProverKind::WrongWitness, ref_trial_seed(1501, i))
            .unwrap();
        accepted += u64::from(t.outcome.accepted());
    }
    let rate = accepted as f64 / trials as f64;
    assert!((0.35..=0.65).contains(&rate), "acceptance rate {rate}, expected near 0.5");
}

#[test]
fn transcripts_emit_the_documented_wire_format() {
    let instance = Instance::ghz3();
    let params = RunParams::default();
    let t = run_protocol(&instance, &params, ProverKind::Honest, 77).unwrap();
    let wire = serde_json::to_value(t.to_wire()).unwrap();

    for key in ["seed", "msg1", "msg2", "msg3", "prover_out", "verifier_out"] {
        assert!(wire.get(key).is_some(), "missing top-level key {key}");
    }
    // Pad commitments carry the four documented fields.
    let com = &wire["msg1"]["com_x"][0];
    for key in ["ske_classical", "f", "h", "bb84"] {
        assert!(com.get(key).is_some(), "missing commitment key {key}");
    }
    // Challenge and positions are 1-based on the wire.
    let c = wire["msg2"]["c"].as_u64().unwrap();
    assert!((1..=3).contains(&c));
    for entry in wire["msg2"]["certs"].as_array().unwrap() {
        assert!(entry["position"].as_u64().unwrap() >= 1);
    }
    for entry in wire["msg3"]["openings"].as_array().unwrap() {
        assert!(entry["position"].as_u64().unwrap() >= 1);
    }
    // Bit strings are width-tagged hex that parses back.
    let f = com["f"].as_str().unwrap();
    let (len, hex) = f.split_once(':').unwrap();
    let parsed = Bits::from_hex(hex, len.parse().unwrap()).unwrap();
    assert_eq!(parsed.len(), params.pad_commit.commit.q());
}

#[test]
fn malformed_messages_are_rejected_not_misread() {
    let instance = Instance::ghz3();
    let params = RunParams::default();
    let mut rng = trial_rng(1601, 0);
    let mut oracles = params.pad_commit.fresh_oracles(&mut rng);
    let (msg1, pstate) = prover_commit(&instance, &params, &mut oracles, &mut rng).unwrap();

    // Dropping a pad commitment is structural, not statistical.
    let mut truncated = msg1.clone();
    truncated.com_x.pop();
    assert!(verifier_challenge(&instance, truncated, &mut rng).is_err());

    let (msg2, _vstate) = verifier_challenge(&instance, msg1, &mut rng).unwrap();

    // An out-of-range challenge index is refused outright.
    let mut bad = msg2.clone();
    bad.c = instance.m();
    assert!(prover_respond(&instance, &pstate, &bad).is_err());

    // Certificate positions must be exactly the challenge complement.
    let mut shuffled = msg2.clone();
    shuffled.certs[0].0 = 99;
    assert!(prover_respond(&instance, &pstate, &shuffled).is_err());
}

#[test]
fn masked_witness_commitments_hide_the_pads_from_the_verifier() {
    // Until msg3, the verifier's view of each pad bit is one single-bit
    // commitment; the empirical distribution of its classical parts must
    // not depend on the committed bit. Spot-check: the one-bit ciphertext
    // body (message XOR pad XOR hash) is balanced across honest runs.
    let instance = Instance::ghz3();
    let params = RunParams::default();
    let mut ones = 0u64;
    let trials = 2000u64;
    for i in 0..trials {
        let t = run_protocol(&instance, &params, ProverKind::Honest, ref_trial_seed(1701, i))
            .unwrap();
        ones += u64::from(t.msg1.com_x[0].ske_ct.classical.get(0));
    }
    let rate = ones as f64 / trials as f64;
    let sigma = binomial_sigma(0.5, trials);
    assert!((rate - 0.5).abs() < 4.0 * sigma, "ciphertext bit rate {rate}");
}

#[test]
fn run_is_a_pure_function_of_its_seed() {
    let instance = Instance::ghz3();
    let params = RunParams::default();
    let a = run_protocol(&instance, &params, ProverKind::Honest, 31415).unwrap();
    let b = run_protocol(&instance, &params, ProverKind::Honest, 31415).unwrap();
    let ja = serde_json::to_string(&a.to_wire()).unwrap();
    let jb = serde_json::to_string(&b.to_wire()).unwrap();
    assert_eq!(ja, jb);
    let c = run_protocol(&instance, &params, ProverKind::Honest, 31416).unwrap();
    let jc = serde_json::to_string(&c.to_wire()).unwrap();
    assert_ne!(ja, jc, "distinct seeds should explore distinct runs");
}
