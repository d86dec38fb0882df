//! Transparent stand-in for quantum homomorphic encryption.
//!
//! Desk-scale executions cannot instantiate semantic security, so the
//! ciphertext payload is a plain bit. Hiding is enforced at the interface
//! instead: the payload field is private to this module, decryption requires
//! the secret key, and "homomorphic evaluation" happens inside the module on
//! behalf of the prover. Completeness and the reduction structure survive;
//! the hardness itself is a modeled assumption.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::QubitState;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    key_id: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockCiphertext {
    /// Transparent payload; readable only through [`dec`] or module-internal
    /// evaluation. Serialization necessarily exposes the byte, which is the
    /// documented price of the mock.
    payload: u8,
    #[serde(with = "hex_u128")]
    nonce: u128,
    #[serde(with = "hex_u128")]
    key_id: u128,
}

impl MockCiphertext {
    pub fn nonce(&self) -> u128 {
        self.nonce
    }
}

mod hex_u128 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:032x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u128, D::Error> {
        let s = String::deserialize(d)?;
        u128::from_str_radix(&s, 16).map_err(serde::de::Error::custom)
    }
}

pub fn gen_sk<R: Rng + ?Sized>(rng: &mut R) -> SecretKey {
    SecretKey {
        key_id: rng.random(),
    }
}

pub fn enc<R: Rng + ?Sized>(sk: &SecretKey, x: u8, rng: &mut R) -> MockCiphertext {
    MockCiphertext {
        payload: x & 1,
        nonce: rng.random(),
        key_id: sk.key_id,
    }
}

pub fn dec(sk: &SecretKey, ct: &MockCiphertext) -> Result<u8> {
    if ct.key_id != sk.key_id {
        return Err(Error::Integrity(
            "ciphertext was not produced under this key".into(),
        ));
    }
    Ok(ct.payload)
}

/// Homomorphic evaluation of a classical single-bit function.
pub fn eval_classical<R: Rng + ?Sized>(
    ct: &MockCiphertext,
    f: impl Fn(u8) -> u8,
    rng: &mut R,
) -> MockCiphertext {
    MockCiphertext {
        payload: f(ct.payload) & 1,
        nonce: rng.random(),
        key_id: ct.key_id,
    }
}

/// Homomorphic run of the honest CHSH first player: prepare an EPR pair,
/// measure observable Z (input 0) or X (input 1) on the first half, and hand
/// back the encrypted outcome together with the collapsed second half.
pub fn eval_chsh_alice<R: Rng + ?Sized>(
    ct: &MockCiphertext,
    rng: &mut R,
) -> (MockCiphertext, QubitState) {
    let x = ct.payload & 1;
    // Either observable on a maximally entangled pair yields a uniform bit.
    let a = u8::from(rng.random::<bool>());
    let partner = match (x, a) {
        (0, bit) => QubitState::basis(bit),
        (_, 0) => QubitState::plane(std::f64::consts::FRAC_PI_4),
        (_, _) => QubitState::plane(-std::f64::consts::FRAC_PI_4),
    };
    let out = MockCiphertext {
        payload: a,
        nonce: rng.random(),
        key_id: ct.key_id,
    };
    (out, partner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::experiment_rng;

    #[test]
    fn round_trip_identity() {
        let mut rng = experiment_rng(1, 0);
        let sk = gen_sk(&mut rng);
        for x in 0..2 {
            assert_eq!(dec(&sk, &enc(&sk, x, &mut rng)).unwrap(), x);
        }
    }

    #[test]
    fn fresh_nonces_per_encryption() {
        let mut rng = experiment_rng(2, 0);
        let sk = gen_sk(&mut rng);
        let a = enc(&sk, 0, &mut rng);
        let b = enc(&sk, 0, &mut rng);
        assert_ne!(a.nonce(), b.nonce());
    }

    #[test]
    fn cross_key_decryption_fails() {
        let mut rng = experiment_rng(3, 0);
        let sk1 = gen_sk(&mut rng);
        let sk2 = gen_sk(&mut rng);
        let ct = enc(&sk1, 1, &mut rng);
        assert!(matches!(dec(&sk2, &ct), Err(Error::Integrity(_))));
    }

    #[test]
    fn classical_eval_applies_function_under_the_hood() {
        let mut rng = experiment_rng(4, 0);
        let sk = gen_sk(&mut rng);
        let ct = enc(&sk, 1, &mut rng);
        let out = eval_classical(&ct, |x| x ^ 1, &mut rng);
        assert_eq!(dec(&sk, &out).unwrap(), 0);
        assert_ne!(out.nonce(), ct.nonce());
    }

    #[test]
    fn chsh_alice_outcome_is_unbiased_and_consistent() {
        let mut rng = experiment_rng(5, 0);
        let sk = gen_sk(&mut rng);
        let trials = 4000;
        let mut ones = 0;
        for x in [0u8, 1] {
            let ct = enc(&sk, x, &mut rng);
            for _ in 0..trials {
                let (a_ct, qubit) = eval_chsh_alice(&ct, &mut rng);
                let a = dec(&sk, &a_ct).unwrap();
                ones += a as usize;
                if x == 0 {
                    assert_eq!(qubit, QubitState::basis(a));
                } else {
                    let expected_a1 = if a == 0 { 1.0 } else { -1.0 };
                    assert!((qubit.a1.re * expected_a1) > 0.0);
                }
            }
        }
        let freq = ones as f64 / (2.0 * trials as f64);
        assert!((freq - 0.5).abs() < 0.03, "frequency {freq}");
    }
}
