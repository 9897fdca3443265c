//! The three-round masked-witness proof protocol.
//!
//! * [`instance`] — projective-check instances, bundled fixtures, local
//!   simulation, and the eigensolver soundness bound;
//! * [`messages`] — the three messages, joint outcomes, transcripts, and
//!   their debug wire forms;
//! * [`run`] — the honest parties, the cheating-prover library, single runs
//!   and sequential repetition;
//! * [`simulator`] — the challenge-guessing simulators and the retry loop
//!   that replaces amplification at desk scale.

pub mod instance;
pub mod messages;
pub mod run;
pub mod simulator;

pub use instance::{Instance, InstanceKind};
pub use messages::{JointOutcome, Msg1, Msg2, Msg3, Transcript, TranscriptWire};
pub use run::{
    prover_commit, prover_commit_with_state, prover_respond, run_protocol, run_sequential,
    verifier_challenge, verifier_verify, ProverKind, ProverState, RunParams, VerifierState,
};
pub use simulator::{
    default_retries, simulator_s1, simulator_s2, simulator_s3, SimRecord, VerifierKind,
};
