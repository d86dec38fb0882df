//! Concrete protocol instantiations of the template.
//!
//! * `kcvy` — the 3-round test: preimage test or equation test, each with
//!   probability 1/2; the equation test sends one string r.
//! * `simplified` — the variant without a preimage test: separate strings
//!   r0, r1 and a type-split inner product.
//! * `klvy_chsh` — the compiled CHSH game over (mock) homomorphic
//!   encryption.
//!
//! The c-hat functions below are the verifiers' decision tables; they are
//! pure so that they can be checked exhaustively.

pub mod kcvy;
pub mod klvy;
pub mod mock_qhe;
pub mod simplified;

pub use kcvy::KcvyVerifier;
pub use klvy::KlvyChshVerifier;
pub use simplified::SimplifiedVerifier;

use crate::error::{Error, Result};
use crate::Bits;

fn sign(bit: u8) -> i8 {
    if bit & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Correct answer for the KCVY equation test.
///
/// If r.(x0+x1) = 0 the prover's residual qubit is |r.x0> and both
/// challenges share the answer (-1)^(r.x0); otherwise the qubit is a
/// conjugate-basis state and the answer is (-1)^(d.(x0+x1)) * (-1)^m.
pub fn kcvy_c_hat(r: &Bits, x0: &Bits, x1: &Bits, d: &Bits, m: u8) -> Result<i8> {
    if x0 == x1 {
        return Err(Error::Validation("claw elements coincide".into()));
    }
    let delta = x0.xor(x1);
    Ok(if r.dot(&delta) == 0 {
        sign(r.dot(x0))
    } else {
        sign(d.dot(&delta)) * sign(m)
    })
}

/// Correct answer for the simplified protocol: with
/// alpha = r0.x0 + r1.x1 and beta = d.(x0+x1),
/// alpha = 0 selects (-1)^(r0.x0) and alpha = 1 selects (-1)^beta * (-1)^m.
pub fn simplified_c_hat(
    r0: &Bits,
    r1: &Bits,
    x0: &Bits,
    x1: &Bits,
    d: &Bits,
    m: u8,
) -> Result<i8> {
    if x0 == x1 {
        return Err(Error::Validation("claw elements coincide".into()));
    }
    let alpha = r0.dot(x0) ^ r1.dot(x1);
    Ok(if alpha == 0 {
        sign(r0.dot(x0))
    } else {
        let beta = d.dot(&x0.xor(x1));
        sign(beta) * sign(m)
    })
}

/// Correct answer for compiled CHSH: (-1)^a * (-1)^(x*m).
pub fn klvy_c_hat(a: u8, x: u8, m: u8) -> i8 {
    sign(a) * sign(x & m)
}
