//! The three protocol messages and the run transcript.
//!
//! In-memory message structs own their quantum parts and move between the
//! parties by value, which is what "sending" means here: once the prover
//! hands Msg1 to the verifier, the verifier alone can measure or delete the
//! commitments inside it.
//!
//! Transcripts serialise to a debug wire form with 1-based qubit and check
//! indices, hex-encoded bit strings, and the conjugate-coded registers'
//! internals laid bare. That last part makes transcript files strictly more
//! revealing than any party's view; they exist for inspection and
//! reproducibility, never as adversary inputs.

use serde::Serialize;

use crate::backend::{Bb84Snapshot, DenseState};
use crate::bits::Bits;
use crate::commitment::{CcdCommitment, CcdDecommitment};
use crate::ske::DeletionCert;

/// Commitment phase: the masked witness plus per-bit pad commitments.
#[derive(Clone, Debug)]
pub struct Msg1 {
    pub masked_state: DenseState,
    pub com_x: Vec<CcdCommitment>,
    pub com_z: Vec<CcdCommitment>,
}

/// Challenge phase: the check index and deletion certificates for every pad
/// commitment outside the checked support, as (position, x-cert, z-cert)
/// with positions ascending.
#[derive(Clone, Debug)]
pub struct Msg2 {
    pub c: usize,
    pub certs: Vec<(usize, DeletionCert, DeletionCert)>,
}

/// Response phase: pad openings on the checked support, as
/// (position, x-opening, z-opening) with positions ascending.
#[derive(Clone, Debug)]
pub struct Msg3 {
    pub openings: Vec<(usize, CcdDecommitment, CcdDecommitment)>,
}

/// Joint outcome of one run: the verifier's verdict counts only when the
/// prover accepted the deletion certificates; otherwise the pair collapses
/// to (reject, reject).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JointOutcome {
    pub prover_accepts: bool,
    /// `None` exactly when the prover rejected (the collapsed branch).
    pub verifier_accepts: Option<bool>,
}

impl JointOutcome {
    pub fn compose(prover_accepts: bool, verifier_verdict: bool) -> JointOutcome {
        JointOutcome {
            prover_accepts,
            verifier_accepts: prover_accepts.then_some(verifier_verdict),
        }
    }

    /// Did both parties accept?
    pub fn accepted(&self) -> bool {
        self.prover_accepts && self.verifier_accepts == Some(true)
    }
}

/// Everything one run produced. The Msg1 snapshot is taken before the
/// verifier consumes any quantum parts.
#[derive(Clone, Debug)]
pub struct Transcript {
    pub msg1: Msg1,
    pub msg2: Msg2,
    pub msg3: Msg3,
    pub outcome: JointOutcome,
    pub verifier_verdict: bool,
    /// Prover-side pad bits on the checked support, ascending; for honest
    /// openings these are exactly what the verifier recovers.
    pub opened_x: Bits,
    pub opened_z: Bits,
    pub seed: u64,
}

impl Transcript {
    pub fn to_wire(&self) -> TranscriptWire {
        TranscriptWire {
            seed: self.seed,
            msg1: Msg1Wire {
                masked_state: self.msg1.masked_state.clone(),
                com_x: self.msg1.com_x.iter().map(commitment_wire).collect(),
                com_z: self.msg1.com_z.iter().map(commitment_wire).collect(),
            },
            msg2: Msg2Wire {
                c: self.msg2.c + 1,
                certs: self
                    .msg2
                    .certs
                    .iter()
                    .map(|(i, cx, cz)| CertEntryWire {
                        position: i + 1,
                        cert_x: cx.outcomes.clone(),
                        cert_z: cz.outcomes.clone(),
                    })
                    .collect(),
            },
            msg3: Msg3Wire {
                openings: self
                    .msg3
                    .openings
                    .iter()
                    .map(|(i, dx, dz)| OpeningEntryWire {
                        position: i + 1,
                        d_x: dx.clone(),
                        d_z: dz.clone(),
                    })
                    .collect(),
            },
            prover_out: self.outcome.prover_accepts,
            verifier_out: self.outcome.verifier_accepts,
            verifier_verdict: self.verifier_verdict,
            opened_x: self.opened_x.clone(),
            opened_z: self.opened_z.clone(),
        }
    }
}

// --- wire structs ------------------------------------------------------------

/// Commitment as written into transcripts: classical parts plus the debug
/// snapshot of the conjugate-coded register.
#[derive(Serialize)]
pub struct CommitmentWire {
    pub ske_classical: Bits,
    pub f: Bits,
    pub h: Bits,
    pub bb84: Bb84Snapshot,
}

fn commitment_wire(com: &CcdCommitment) -> CommitmentWire {
    CommitmentWire {
        ske_classical: com.ske_ct.classical.clone(),
        f: com.f.clone(),
        h: com.h.clone(),
        bb84: com.ske_ct.quantum.debug_snapshot(),
    }
}

#[derive(Serialize)]
pub struct Msg1Wire {
    pub masked_state: DenseState,
    pub com_x: Vec<CommitmentWire>,
    pub com_z: Vec<CommitmentWire>,
}

#[derive(Serialize)]
pub struct CertEntryWire {
    pub position: usize,
    pub cert_x: Bits,
    pub cert_z: Bits,
}

#[derive(Serialize)]
pub struct Msg2Wire {
    pub c: usize,
    pub certs: Vec<CertEntryWire>,
}

#[derive(Serialize)]
pub struct OpeningEntryWire {
    pub position: usize,
    pub d_x: CcdDecommitment,
    pub d_z: CcdDecommitment,
}

#[derive(Serialize)]
pub struct Msg3Wire {
    pub openings: Vec<OpeningEntryWire>,
}

/// Full transcript wire form: 1-based positions and check index, hex bit
/// strings, BB84 snapshots.
#[derive(Serialize)]
pub struct TranscriptWire {
    pub seed: u64,
    pub msg1: Msg1Wire,
    pub msg2: Msg2Wire,
    pub msg3: Msg3Wire,
    pub prover_out: bool,
    pub verifier_out: Option<bool>,
    pub verifier_verdict: bool,
    pub opened_x: Bits,
    pub opened_z: Bits,
}
