//! Commitment with certified everlasting hiding.
//!
//! A commitment to an n-bit message `m` combines three parts:
//!
//! * a one-time certified-deletion ciphertext of `m` under a fresh key `sk`
//!   (see [`crate::ske`]),
//! * a classical commitment `f = O(R || R')` to a fresh s-bit string `R`,
//! * a mask `h = H(R) XOR serialize(sk)` hiding the key behind the oracle's
//!   value at `R`.
//!
//! The decommitment is `d = (R, R')`; the key record `ck = sk` stays with the
//! committer for deletion-certificate checks. Opening runs in two stages:
//! `ccd_verify1` checks the classical opening, `ccd_verify2` unmasks the key
//! from `h` and decrypts the quantum part. Binding is classical: at desk
//! widths an unbounded extractor can sweep every `(R, R')` and recover the
//! unique opening of `f`. Hiding is certified everlasting: once the receiver
//! presents a valid deletion certificate, the quantum pad is destroyed and
//! `h` alone is a one-time-padded key that reveals nothing about `m`, even to
//! an unbounded distinguisher that is later handed `d` and `ck`.
//!
//! A sum-binding opening predicate (`ccd_verify_sum`) covers the single-bit
//! message space used by the protocol layer.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::oracle::{
    commit_classical, extract_classical, verify_opening, CommitParams, RandomOracle,
};
use crate::ske::{DeletionCert, SkeCiphertext, SkeParams, SkeSecretKey};

/// Encryption widths plus classical-commitment widths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CcdParams {
    pub ske: SkeParams,
    pub commit: CommitParams,
}

impl CcdParams {
    pub fn new(ske: SkeParams, commit: CommitParams) -> Result<Self> {
        ske.validate()?;
        Ok(CcdParams { ske, commit })
    }

    pub fn validate(&self) -> Result<()> {
        self.ske.validate()
    }

    /// Width of the key mask `h`.
    pub fn mask_len(&self) -> usize {
        self.ske.serialized_key_len()
    }

    /// Desk-scale defaults: 8-bit messages, 32 qubits, 16-bit R.
    pub fn default_desk() -> Self {
        CcdParams {
            ske: SkeParams::default_desk(),
            commit: CommitParams { s: 16, t: 16 },
        }
    }

    /// Small mode: 4-bit messages, 8 qubits, brute-forceable 8-bit R.
    pub fn small() -> Self {
        CcdParams { ske: SkeParams::small(), commit: CommitParams { s: 8, t: 8 } }
    }

    /// Single-bit message space (the protocol's pad commitments).
    pub fn single_bit(mu: usize, mu_comp: usize, commit: CommitParams) -> Result<Self> {
        Ok(CcdParams { ske: SkeParams::single_bit(mu, mu_comp)?, commit })
    }

    /// Fresh oracle pair of the right shapes: `h` maps s bits to mask_len
    /// bits, `commit` maps s+t bits to q bits.
    pub fn fresh_oracles<R: Rng + ?Sized>(&self, rng: &mut R) -> OracleSet {
        OracleSet {
            h: RandomOracle::new(self.mask_len(), rng),
            commit: self.commit.fresh_oracle(rng),
        }
    }
}

/// The two independent random oracles a commitment lives against.
#[derive(Clone, Debug)]
pub struct OracleSet {
    pub h: RandomOracle,
    pub commit: RandomOracle,
}

/// Commitment: certified-deletion ciphertext, classical commitment to R,
/// and the masked key.
#[derive(Clone, Debug)]
pub struct CcdCommitment {
    pub ske_ct: SkeCiphertext,
    pub f: Bits,
    pub h: Bits,
}

/// Decommitment d = (d1, d2) = (R, R').
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CcdDecommitment {
    pub d1: Bits,
    pub d2: Bits,
}

/// The committer's key record; certificate verification needs it.
#[derive(Clone, Debug)]
pub struct CcdKey {
    ck: SkeSecretKey,
}

impl CcdKey {
    pub fn secret_key(&self) -> &SkeSecretKey {
        &self.ck
    }

    /// The bit string masked into `h` (theta || u || hash_seed).
    pub fn masked_bits(&self) -> Bits {
        self.ck.serialize_masked()
    }
}

/// Commit to `m`: fresh key, encrypt, commit to a fresh R, mask the key.
pub fn ccd_commit<R: Rng + ?Sized>(
    params: &CcdParams,
    oracles: &mut OracleSet,
    m: &Bits,
    rng: &mut R,
) -> Result<(CcdCommitment, CcdDecommitment, CcdKey)> {
    params.validate()?;
    let mut sk = SkeSecretKey::generate(params.ske, rng)?;
    let ske_ct = sk.encrypt(m, rng)?;
    let r = Bits::random(params.commit.s, rng);
    let rp = Bits::random(params.commit.t, rng);
    let f = commit_classical(&mut oracles.commit, &params.commit, &r, &rp)?;
    let h = oracles.h.query(&r).xor(&sk.serialize_masked());
    Ok((
        CcdCommitment { ske_ct, f, h },
        CcdDecommitment { d1: r, d2: rp },
        CcdKey { ck: sk },
    ))
}

/// Stage one: does (d1, d2) open the classical part f? Never touches the
/// quantum part.
pub fn ccd_verify1(
    params: &CcdParams,
    oracles: &mut OracleSet,
    com: &CcdCommitment,
    d: &CcdDecommitment,
) -> Result<bool> {
    verify_opening(&mut oracles.commit, &params.commit, &com.f, &d.d1, &d.d2)
}

/// Stage two: unmask the key as H(d1) XOR h and decrypt. Consumes the
/// quantum part. A d1 that unmasks to a malformed key (wrong basis weight)
/// decrypts to uniform noise rather than failing: opening never errors, it
/// just yields garbage, matching what a wrong-but-well-formed key produces.
pub fn ccd_verify2<R: Rng + ?Sized>(
    params: &CcdParams,
    oracles: &mut OracleSet,
    com: &mut CcdCommitment,
    d1: &Bits,
    rng: &mut R,
) -> Result<Bits> {
    if com.h.len() != params.mask_len() {
        return Err(Error::LengthMismatch { expected: params.mask_len(), got: com.h.len() });
    }
    let sk_bits = oracles.h.query(d1).xor(&com.h);
    match SkeSecretKey::deserialize_masked(params.ske, &sk_bits) {
        Ok(sk) => sk.decrypt(&mut com.ske_ct, rng),
        Err(_) => Ok(Bits::random(params.ske.msg_len, rng)),
    }
}

/// Full opening: verify1 gating verify2. `None` is the reject outcome.
pub fn ccd_verify<R: Rng + ?Sized>(
    params: &CcdParams,
    oracles: &mut OracleSet,
    com: &mut CcdCommitment,
    d: &CcdDecommitment,
    rng: &mut R,
) -> Result<Option<Bits>> {
    if !ccd_verify1(params, oracles, com, d)? {
        return Ok(None);
    }
    Ok(Some(ccd_verify2(params, oracles, com, &d.d1, rng)?))
}

/// Delete the quantum part, producing the certificate.
pub fn ccd_del<R: Rng + ?Sized>(com: &mut CcdCommitment, rng: &mut R) -> DeletionCert {
    com.ske_ct.delete(rng)
}

/// Check a deletion certificate against the committer's key record.
pub fn ccd_cert(cert: &DeletionCert, ck: &CcdKey) -> Result<bool> {
    ck.ck.verify_cert(cert)
}

/// Unbounded extraction of the committed R from f alone (sweeps every
/// opening; feasible only at small widths).
pub fn ccd_extract(
    params: &CcdParams,
    oracles: &mut OracleSet,
    f: &Bits,
) -> Result<Option<Bits>> {
    extract_classical(&mut oracles.commit, &params.commit, f)
}

/// Sum-binding opening predicate for single-bit messages: accept iff the
/// classical opening checks and the decrypted bit equals `b`.
pub fn ccd_verify_sum<R: Rng + ?Sized>(
    params: &CcdParams,
    oracles: &mut OracleSet,
    com: &mut CcdCommitment,
    d: &CcdDecommitment,
    b: bool,
    rng: &mut R,
) -> Result<bool> {
    if params.ske.msg_len != 1 {
        return Err(Error::InvalidParams(format!(
            "sum-binding applies to single-bit messages, msg_len={}",
            params.ske.msg_len
        )));
    }
    match ccd_verify(params, oracles, com, d, rng)? {
        Some(bits) => Ok(bits.get(0) == b),
        None => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    fn small() -> CcdParams {
        CcdParams::small()
    }

    #[test]
    fn commit_verify_round_trips() {
        let mut rng = trial_rng(30, 0);
        let params = small();
        for _ in 0..50 {
            let mut oracles = params.fresh_oracles(&mut rng);
            let m = Bits::random(params.ske.msg_len, &mut rng);
            let (mut com, d, _ck) = ccd_commit(&params, &mut oracles, &m, &mut rng).unwrap();
            assert_eq!(com.h.len(), params.mask_len());
            let got = ccd_verify(&params, &mut oracles, &mut com, &d, &mut rng).unwrap();
            assert_eq!(got, Some(m));
        }
    }

    #[test]
    fn mask_width_matches_the_documented_example() {
        // 8-bit messages, 32 qubits, 16 computational: 32 + 8 + 23 = 63.
        assert_eq!(CcdParams::default_desk().mask_len(), 63);
    }

    #[test]
    fn bad_openings_reject() {
        let mut rng = trial_rng(31, 0);
        let params = small();
        let mut oracles = params.fresh_oracles(&mut rng);
        let m = Bits::random(params.ske.msg_len, &mut rng);
        let (mut com, d, _ck) = ccd_commit(&params, &mut oracles, &m, &mut rng).unwrap();
        let mut bad_d2 = d.clone();
        bad_d2.d2.set(0, !bad_d2.d2.get(0));
        assert!(!ccd_verify1(&params, &mut oracles, &com, &bad_d2).unwrap());
        assert_eq!(
            ccd_verify(&params, &mut oracles, &mut com, &bad_d2, &mut rng).unwrap(),
            None
        );
    }

    #[test]
    fn deletion_certificates_check_out() {
        let mut rng = trial_rng(32, 0);
        let params = small();
        for _ in 0..50 {
            let mut oracles = params.fresh_oracles(&mut rng);
            let m = Bits::random(params.ske.msg_len, &mut rng);
            let (mut com, _d, ck) = ccd_commit(&params, &mut oracles, &m, &mut rng).unwrap();
            let cert = ccd_del(&mut com, &mut rng);
            assert!(ccd_cert(&cert, &ck).unwrap());
        }
    }

    #[test]
    fn extraction_recovers_the_committed_r() {
        let mut rng = trial_rng(33, 0);
        let params = small();
        let mut oracles = params.fresh_oracles(&mut rng);
        let m = Bits::random(params.ske.msg_len, &mut rng);
        let (com, d, _ck) = ccd_commit(&params, &mut oracles, &m, &mut rng).unwrap();
        let got = ccd_extract(&params, &mut oracles, &com.f).unwrap();
        assert_eq!(got, Some(d.d1));
    }

    #[test]
    fn sum_binding_accepts_only_the_committed_bit() {
        let mut rng = trial_rng(34, 0);
        let params = CcdParams::single_bit(8, 4, CommitParams { s: 8, t: 8 }).unwrap();
        for bit in [false, true] {
            let mut oracles = params.fresh_oracles(&mut rng);
            let m: Bits = [bit].into_iter().collect();
            let (com, d, _ck) = ccd_commit(&params, &mut oracles, &m, &mut rng).unwrap();
            let mut com_a = com.clone();
            let mut com_b = com.clone();
            assert!(ccd_verify_sum(&params, &mut oracles, &mut com_a, &d, bit, &mut rng).unwrap());
            assert!(!ccd_verify_sum(&params, &mut oracles, &mut com_b, &d, !bit, &mut rng).unwrap());
        }
    }

    #[test]
    fn wrong_message_space_is_rejected_for_sum_binding() {
        let mut rng = trial_rng(35, 0);
        let params = small(); // msg_len = 4
        let mut oracles = params.fresh_oracles(&mut rng);
        let m = Bits::random(4, &mut rng);
        let (mut com, d, _ck) = ccd_commit(&params, &mut oracles, &m, &mut rng).unwrap();
        assert!(ccd_verify_sum(&params, &mut oracles, &mut com, &d, false, &mut rng).is_err());
    }
}
