//! Quantum simulation backends.
//!
//! Two complementary models cover everything the library needs:
//!
//! * [`Bb84Register`] — a symbolic register of conjugate-coded product
//!   states, exact and cheap at any width; this carries the quantum part of
//!   ciphertexts and commitments.
//! * [`DenseState`] — a full density matrix capped at
//!   [`MAX_DENSE_QUBITS`](dense::MAX_DENSE_QUBITS) qubits for witness states,
//!   Pauli masking, partial traces, and projective checks.

pub mod bb84;
pub mod dense;
pub mod povm;

pub use bb84::{Basis, Bb84Register, Bb84Snapshot};
pub use dense::{DenseState, PauliMask, MAX_DENSE_QUBITS, STATE_TOL};
pub use povm::Povm;
