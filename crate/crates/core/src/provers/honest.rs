//! The honest quantum prover.
//!
//! For the TCF protocols it walks the standard pipeline: hold the claw
//! superposition, attach the inner-product bit, collapse the claw register
//! with a Hadamard measurement, and answer the challenge by measuring the
//! residual qubit at +-pi/8. The classical simulation needs the claw labels,
//! which it recovers from public data at desk scale; a physical prover would
//! hold the superposition without ever knowing them.

use num_integer::Integer;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Party, Result};
use crate::protocol::{BranchChoice, Message, ProtocolId, Prover};
use crate::qsim::{
    append_inner_products, hadamard_collapse, measure_basis, measure_rotated, superpose_claw,
    QubitState,
};
use crate::suite::mock_qhe;
use crate::tcf::{self, Claw, TcfKey};
use crate::Bits;

use super::challenge_angle;

pub struct HonestQuantumProver {
    protocol: ProtocolId,
    key: Option<TcfKey>,
    claw: Option<Claw>,
    qubit: Option<QubitState>,
}

impl HonestQuantumProver {
    pub fn new(protocol: ProtocolId) -> Self {
        HonestQuantumProver {
            protocol,
            key: None,
            claw: None,
            qubit: None,
        }
    }

    fn unexpected(&self, msg: &Message) -> Error {
        Error::violation(
            Party::Verifier,
            format!("prover cannot handle {} here", msg.kind()),
        )
    }
}

/// Uniform domain element; together with its claw partner this simulates
/// preparing the claw superposition and measuring y.
pub fn sample_domain_element<R: Rng + ?Sized>(key: &TcfKey, rng: &mut R) -> Result<Bits> {
    match key {
        TcfKey::Toy { n_bits, .. } => Ok(Bits::from_u64(
            rng.random_range(0..(1u64 << n_bits)),
            *n_bits,
        )?),
        TcfKey::Rabin { n_bits, modulus } => {
            let n64 = u64::try_from(modulus)
                .map_err(|_| Error::Validation("modulus exceeds the desk-scale cap".into()))?;
            let half = (n64 - 1) / 2;
            for _ in 0..10_000 {
                let v = rng.random_range(1..=half);
                if num_bigint::BigUint::from(v).gcd(modulus).is_one() {
                    return Bits::from_u64(v, *n_bits);
                }
            }
            Err(Error::Generation("no coprime domain element found".into()))
        }
    }
}

impl Prover for HonestQuantumProver {
    fn protocol_id(&self) -> ProtocolId {
        self.protocol
    }

    fn respond(&mut self, msg: &Message, rng: &mut ChaCha12Rng) -> Result<Message> {
        match (self.protocol, msg) {
            (ProtocolId::Kcvy | ProtocolId::Simplified, Message::Key { key }) => {
                let x = sample_domain_element(key, rng)?;
                let claw = tcf::claw_of(key, &x)?;
                let y = claw.y.clone();
                self.key = Some(key.clone());
                self.claw = Some(claw);
                Ok(Message::Y { value: y })
            }
            (ProtocolId::Kcvy | ProtocolId::Simplified, Message::R { r0, r1 }) => {
                let key = self.key.as_ref().ok_or_else(|| self.unexpected(msg))?;
                let claw = self.claw.as_ref().ok_or_else(|| self.unexpected(msg))?;
                let state = superpose_claw(claw)?;
                let state =
                    append_inner_products(&state, r0, r1, |x| tcf::preimage_type(key, x))?;
                let (d, qubit) = hadamard_collapse(&state, rng)?;
                self.qubit = Some(qubit);
                Ok(Message::D { value: d })
            }
            (
                ProtocolId::Kcvy,
                Message::Branch {
                    value: BranchChoice::Preimage,
                },
            ) => {
                let claw = self.claw.as_ref().ok_or_else(|| self.unexpected(msg))?;
                let state = superpose_claw(claw)?;
                let label = measure_basis(&state, rng)?;
                Ok(Message::X {
                    value: label[0].clone(),
                })
            }
            (ProtocolId::KlvyChsh, Message::Ciphertext { ct }) => {
                let (answer, partner) = mock_qhe::eval_chsh_alice(ct, rng);
                self.qubit = Some(partner);
                Ok(Message::Ciphertext { ct: answer })
            }
            (_, Message::Challenge { m }) if *m <= 1 => {
                let qubit = self.qubit.as_ref().ok_or_else(|| self.unexpected(msg))?;
                let b = measure_rotated(qubit, challenge_angle(*m), rng)?;
                Ok(Message::Response { b })
            }
            _ => Err(self.unexpected(msg)),
        }
    }
}
