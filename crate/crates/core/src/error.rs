//! Error types shared across the toolkit.

use thiserror::Error;

/// Which side of an interaction produced a bad message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Verifier,
    Prover,
}

impl std::fmt::Display for Party {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Party::Verifier => write!(f, "verifier"),
            Party::Prover => write!(f, "prover"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Key generation could not satisfy the family invariants.
    #[error("key generation failed: {0}")]
    Generation(String),

    /// An input fell outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A range element has no preimage under the keyed function.
    #[error("no preimage: {0}")]
    NoPreimage(String),

    /// A claw, state, projector or other value failed validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// A state lost (or never had) unit norm.
    #[error("normalization error: squared norm {0}")]
    Normalization(f64),

    /// One party sent a message the protocol does not allow at this point.
    #[error("protocol violation by {party}: {detail}")]
    ProtocolViolation { party: Party, detail: String },

    /// Verifier and prover roles disagree on which protocol they run.
    #[error("protocol mismatch: verifier runs {verifier}, prover runs {prover}")]
    ProtocolMismatch { verifier: String, prover: String },

    /// A ciphertext failed its integrity check.
    #[error("ciphertext integrity error: {0}")]
    Integrity(String),

    /// A simulation exceeded the register budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn violation(party: Party, detail: impl Into<String>) -> Self {
        Error::ProtocolViolation {
            party,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
