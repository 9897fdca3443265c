//! One-time secret-key encryption with certified deletion.
//!
//! A key fixes a basis string theta (mu positions, of which mu - mu_comp are
//! Hadamard), a one-time pad u, and a Toeplitz hash seed. Encryption draws a
//! fresh mu-bit string r, conjugate-codes it qubit-wise as the quantum part,
//! and masks the message as
//!
//! ```text
//! classical = m XOR u XOR T(r restricted to computational positions)
//! ```
//!
//! Decryption measures the computational positions to recover the hash input;
//! deletion measures *every* position in the Hadamard basis and publishes the
//! outcomes as a certificate. The certificate checks out only if it matches r
//! on the Hadamard positions, which forces the deleter to have measured the
//! register in a basis that destroys the computational positions -- after a
//! valid deletion, nobody (even given the key) can reconstruct the hash input.
//!
//! The encryptor keeps r's Hadamard restriction inside its key record for
//! certificate verification; the computational restriction is never retained
//! classically, since holding it would trivially defeat deletion.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::backend::Bb84Register;
use crate::bits::Bits;
use crate::error::{Error, Result};

/// Width parameters for the one-time scheme.
///
/// * `msg_len` — message bits (n);
/// * `mu` — total qubits in the quantum part;
/// * `mu_comp` — computational-basis positions among them (the hash input);
/// * `cert_threshold` — tolerated mismatches on the Hadamard positions when
///   verifying a deletion certificate (0 for exact matching).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeParams {
    pub msg_len: usize,
    pub mu: usize,
    pub mu_comp: usize,
    pub cert_threshold: usize,
}

impl SkeParams {
    pub fn new(msg_len: usize, mu: usize, mu_comp: usize, cert_threshold: usize) -> Result<Self> {
        let p = SkeParams { msg_len, mu, mu_comp, cert_threshold };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu_comp == 0 || self.mu_comp >= self.mu {
            return Err(Error::InvalidParams(format!(
                "need 1 <= mu_comp < mu, got mu_comp={}, mu={}",
                self.mu_comp, self.mu
            )));
        }
        if self.msg_len == 0 || self.msg_len > self.mu_comp {
            return Err(Error::InvalidParams(format!(
                "need 1 <= msg_len <= mu_comp, got msg_len={}, mu_comp={}",
                self.msg_len, self.mu_comp
            )));
        }
        Ok(())
    }

    /// Desk-scale defaults: 8-bit messages in a 32-qubit register.
    pub fn default_desk() -> Self {
        SkeParams { msg_len: 8, mu: 32, mu_comp: 16, cert_threshold: 0 }
    }

    /// Statistics-friendly small mode: 4-bit messages in 8 qubits.
    pub fn small() -> Self {
        SkeParams { msg_len: 4, mu: 8, mu_comp: 4, cert_threshold: 0 }
    }

    /// Single-bit messages for the protocol's pad commitments.
    pub fn single_bit(mu: usize, mu_comp: usize) -> Result<Self> {
        SkeParams::new(1, mu, mu_comp, 0)
    }

    /// Hadamard positions in the register.
    pub fn mu_hadamard(&self) -> usize {
        self.mu - self.mu_comp
    }

    /// Toeplitz seed width for mu_comp -> msg_len hashing.
    pub fn seed_len(&self) -> usize {
        self.mu_comp + self.msg_len - 1
    }

    /// Width of the serialized key: theta || u || hash_seed.
    pub fn serialized_key_len(&self) -> usize {
        self.mu + self.msg_len + self.seed_len()
    }
}

/// Secret key plus (after encryption) the record needed to verify deletion
/// certificates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkeSecretKey {
    params: SkeParams,
    /// Basis string: 0 = computational, 1 = Hadamard; weight mu - mu_comp.
    theta: Bits,
    /// One-time pad over the message.
    u: Bits,
    /// Toeplitz seed, mu_comp + msg_len - 1 bits.
    hash_seed: Bits,
    /// r restricted to the Hadamard positions (ascending), recorded by the
    /// encryptor for certificate verification. Never includes the
    /// computational restriction.
    r_hadamard: Option<Bits>,
}

impl SkeSecretKey {
    /// Sample a fresh key: theta uniform over weight-(mu - mu_comp) strings,
    /// pad and hash seed uniform.
    pub fn generate<R: Rng + ?Sized>(params: SkeParams, rng: &mut R) -> Result<Self> {
        params.validate()?;
        let mut theta = Bits::zeros(params.mu);
        for idx in rand::seq::index::sample(rng, params.mu, params.mu_hadamard()) {
            theta.set(idx, true);
        }
        Ok(SkeSecretKey {
            params,
            theta,
            u: Bits::random(params.msg_len, rng),
            hash_seed: Bits::random(params.seed_len(), rng),
            r_hadamard: None,
        })
    }

    pub fn params(&self) -> &SkeParams {
        &self.params
    }

    pub fn theta(&self) -> &Bits {
        &self.theta
    }

    pub fn pad(&self) -> &Bits {
        &self.u
    }

    pub fn hash_seed(&self) -> &Bits {
        &self.hash_seed
    }

    /// Positions encrypted in the computational basis, ascending.
    pub fn comp_positions(&self) -> Vec<usize> {
        self.theta.positions(false)
    }

    /// Positions encrypted in the Hadamard basis, ascending.
    pub fn hadamard_positions(&self) -> Vec<usize> {
        self.theta.positions(true)
    }

    /// theta || u || hash_seed. This is the portion of the key a receiver
    /// needs to decrypt, and the portion masked into commitments; the
    /// certificate record is deliberately not part of it.
    pub fn serialize_masked(&self) -> Bits {
        self.theta.concat(&self.u).concat(&self.hash_seed)
    }

    /// Inverse of [`serialize_masked`](Self::serialize_masked). Fails if the
    /// width is wrong or the basis string does not have the required weight.
    pub fn deserialize_masked(params: SkeParams, bits: &Bits) -> Result<Self> {
        params.validate()?;
        let parts = bits.split(&[params.mu, params.msg_len, params.seed_len()])?;
        let theta = parts[0].clone();
        if theta.hamming_weight() != params.mu_hadamard() {
            return Err(Error::InvalidParams(format!(
                "basis string has weight {}, expected {}",
                theta.hamming_weight(),
                params.mu_hadamard()
            )));
        }
        Ok(SkeSecretKey {
            params,
            theta,
            u: parts[1].clone(),
            hash_seed: parts[2].clone(),
            r_hadamard: None,
        })
    }

    /// One-time encryption. Records the certificate-verification data in the
    /// key; a second call on the same key is refused.
    pub fn encrypt<R: Rng + ?Sized>(&mut self, m: &Bits, rng: &mut R) -> Result<SkeCiphertext> {
        if m.len() != self.params.msg_len {
            return Err(Error::LengthMismatch { expected: self.params.msg_len, got: m.len() });
        }
        if self.r_hadamard.is_some() {
            return Err(Error::KeyAlreadyUsed);
        }
        let r = Bits::random(self.params.mu, rng);
        self.r_hadamard = Some(r.select(&self.hadamard_positions()));
        let r_comp = r.select(&self.comp_positions());
        let classical = m
            .xor(&self.u)
            .xor(&toeplitz_hash(&self.hash_seed, &r_comp, self.params.msg_len));
        let quantum = Bb84Register::new(&self.theta, &r)?;
        Ok(SkeCiphertext { classical, quantum })
    }

    /// Decrypt by measuring the computational positions. Destructive on the
    /// quantum part; after a deletion those positions yield fresh noise and
    /// the output is uniform junk, which is the point of the scheme.
    pub fn decrypt<R: Rng + ?Sized>(&self, ct: &mut SkeCiphertext, rng: &mut R) -> Result<Bits> {
        if ct.quantum.len() != self.params.mu {
            return Err(Error::LengthMismatch { expected: self.params.mu, got: ct.quantum.len() });
        }
        if ct.classical.len() != self.params.msg_len {
            return Err(Error::LengthMismatch {
                expected: self.params.msg_len,
                got: ct.classical.len(),
            });
        }
        let r_comp: Bits = self
            .comp_positions()
            .into_iter()
            .map(|i| ct.quantum.measure_at(i, crate::backend::Basis::Computational, rng))
            .collect();
        Ok(ct
            .classical
            .xor(&self.u)
            .xor(&toeplitz_hash(&self.hash_seed, &r_comp, self.params.msg_len)))
    }

    /// Check a deletion certificate: at most `cert_threshold` mismatches
    /// against r on the Hadamard positions. Requires this key to have
    /// encrypted (the record exists only on the encryptor's side).
    pub fn verify_cert(&self, cert: &DeletionCert) -> Result<bool> {
        let recorded = self.r_hadamard.as_ref().ok_or(Error::NoEncryptionRecord)?;
        if cert.outcomes.len() != self.params.mu {
            return Err(Error::LengthMismatch { expected: self.params.mu, got: cert.outcomes.len() });
        }
        let at_hadamard = cert.outcomes.select(&self.hadamard_positions());
        Ok(at_hadamard.hamming_distance(recorded) <= self.params.cert_threshold)
    }
}

/// Ciphertext: masked classical part plus the conjugate-coded register.
#[derive(Clone, Debug)]
pub struct SkeCiphertext {
    pub classical: Bits,
    pub quantum: Bb84Register,
}

impl SkeCiphertext {
    /// Deletion: measure every position in the Hadamard basis and publish
    /// the outcomes. Destructive.
    pub fn delete<R: Rng + ?Sized>(&mut self, rng: &mut R) -> DeletionCert {
        let all_hadamard: Bits = (0..self.quantum.len()).map(|_| true).collect();
        let outcomes = self
            .quantum
            .measure_all(&all_hadamard, rng)
            .expect("basis string width matches register");
        DeletionCert { outcomes }
    }
}

/// Hadamard-basis measurement outcomes over the whole register.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionCert {
    pub outcomes: Bits,
}

/// Toeplitz-matrix universal hash: out[j] = XOR_k seed[j - k + in_len - 1]
/// for the set positions k of `input`. The seed spans the in_len + out_len - 1
/// diagonals.
pub fn toeplitz_hash(seed: &Bits, input: &Bits, out_len: usize) -> Bits {
    let in_len = input.len();
    assert_eq!(
        seed.len(),
        in_len + out_len - 1,
        "Toeplitz seed must cover in_len + out_len - 1 diagonals"
    );
    (0..out_len)
        .map(|j| {
            (0..in_len)
                .filter(|&k| input.get(k))
                .fold(false, |acc, k| acc ^ seed.get(j + in_len - 1 - k))
        })
        .collect()
}
