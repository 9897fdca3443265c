//! Desk-scale simulation of commitments whose hiding survives unbounded
//! attackers once a deletion certificate checks out, plus the three-round
//! masked-witness proof protocol built on top of them.
//!
//! The crate is organised bottom-up:
//!
//! * [`backend`] — exact simulation of conjugate-coded product states and a
//!   small dense density-matrix engine;
//! * [`oracle`] — lazily-sampled random oracles with query logs and
//!   reprogramming, and the classical commitment derived from them;
//! * [`ske`] — one-time secret-key encryption whose ciphertexts can be
//!   provably deleted by measuring them in the conjugate basis;
//! * [`commitment`] — the deletion-certified bit/string commitment that
//!   combines the two layers;
//! * [`protocol`] — the three-round proof protocol (masked witness,
//!   pad commitments, deletion certificates) with its verifier, cheating
//!   provers, and rejection-sampling simulators;
//! * [`experiments`] — the security games, adversary-strategy library, and
//!   Monte Carlo estimators;
//! * [`stats`] — advantage/confidence arithmetic, total-variation estimates,
//!   and goodness-of-fit helpers.
//!
//! Every randomised routine takes an explicit stream (see [`rng`]), so any
//! experiment is reproducible bit-for-bit from a master seed, independent of
//! thread count.

pub mod backend;
pub mod bits;
pub mod commitment;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod protocol;
pub mod rng;
pub mod ske;
pub mod stats;

pub use backend::{Basis, Bb84Register, DenseState, PauliMask, Povm, MAX_DENSE_QUBITS};
pub use bits::Bits;
pub use commitment::{CcdCommitment, CcdDecommitment, CcdKey, CcdParams, OracleSet};
pub use error::{Error, Result};
pub use oracle::{CommitParams, RandomOracle};
pub use rng::{trial_rng, TrialRng};
pub use ske::{DeletionCert, SkeCiphertext, SkeParams, SkeSecretKey};

