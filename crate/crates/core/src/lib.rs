//! Building blocks for single-prover tests of quantumness.
//!
//! The toolkit covers the full pipeline: trapdoor claw-free functions
//! ([`tcf`]), a sparse statevector simulator for the honest prover ([`qsim`]),
//! the two-phase challenge/response template and its concrete protocols
//! ([`protocol`], [`suite`]), honest and adversarial provers ([`provers`]),
//! claw extraction from parity predictors ([`extract`]), and the numerical
//! soundness and qubit-certification analysis ([`analysis`]).

pub mod analysis;
pub mod bits;
pub mod error;
pub mod extract;
pub mod protocol;
pub mod provers;
pub mod qsim;
pub mod rng;
pub mod suite;
pub mod tcf;

pub use bits::Bits;
pub use error::{Error, Party, Result};
