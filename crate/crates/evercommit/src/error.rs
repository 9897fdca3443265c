//! Library-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A bit string had the wrong width for the operation.
    #[error("bit-string length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A parameter set failed validation.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A matrix failed the density-matrix checks (Hermitian, unit trace,
    /// positive semidefinite).
    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    /// More qubits were requested than the dense simulation supports.
    #[error("register of {got} qubits exceeds the dense-simulation cap of {cap}")]
    TooManyQubits { got: usize, cap: usize },

    /// A measurement support set was empty, unsorted, or out of range.
    #[error("invalid qubit support {0:?}")]
    InvalidSupport(Vec<usize>),

    /// An operator claimed to be a projector was not Hermitian idempotent.
    #[error("operator is not a projector: {0}")]
    NotAProjector(String),

    /// A brute-force opening search was requested beyond the supported size.
    #[error("opening search space of 2^{0} exceeds the brute-force cap of 2^24")]
    SearchSpaceTooLarge(usize),

    /// Two distinct committed values opened the same classical commitment.
    /// At the default output width this indicates a broken oracle, so the
    /// extractor refuses to pick a winner.
    #[error("oracle collision: distinct committed values open the same commitment")]
    OracleCollision,

    /// A one-time key was asked to encrypt twice.
    #[error("one-time key has already encrypted a message")]
    KeyAlreadyUsed,

    /// Certificate verification was requested before the key ever encrypted,
    /// so there is no record to verify against.
    #[error("key has no encryption record to verify a certificate against")]
    NoEncryptionRecord,

    /// A protocol message failed structural validation.
    #[error("malformed message: {0}")]
    MalformedMessage(String),

    /// An instance file or builder failed validation.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// The instance has no witness but one was required.
    #[error("instance carries no witness state")]
    MissingWitness,

    /// A rejection-sampling simulator ran out of retries.
    #[error("simulator exhausted {0} retries without a matching challenge")]
    RetriesExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
