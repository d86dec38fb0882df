//! A deterministic classical strategy achieving the 3/4 optimum.
//!
//! The prover honestly derives y from a fixed domain element x, sends
//! d = 0^n, and answers with its one known inner-product bit. Whenever the
//! hidden selector bit is 0 the answer is certainly right; otherwise the
//! zeroed d pins the conjugate answer to (-1)^m and the prover is right half
//! the time, for 3/4 on average. The matching exhaustive ceiling certifier
//! lives in the harness.

use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Party, Result};
use crate::protocol::{BranchChoice, Message, ProtocolId, Prover};
use crate::suite::mock_qhe;
use crate::tcf::{self, TcfKey};
use crate::Bits;

pub struct OptimalClassicalProver {
    protocol: ProtocolId,
    known_bit: Option<u8>,
    x: Option<Bits>,
    n: usize,
}

impl OptimalClassicalProver {
    pub fn new(protocol: ProtocolId) -> Self {
        OptimalClassicalProver {
            protocol,
            known_bit: None,
            x: None,
            n: 0,
        }
    }

    /// The fixed preimage choice: the smallest valid domain element.
    pub fn pick_preimage(key: &TcfKey) -> Result<Bits> {
        match key {
            TcfKey::Toy { n_bits, .. } => Ok(Bits::zeros(*n_bits)),
            TcfKey::Rabin { n_bits, .. } => Ok(Bits::from_u64(1, *n_bits)?),
        }
    }

    fn unexpected(&self, msg: &Message) -> Error {
        Error::violation(
            Party::Verifier,
            format!("prover cannot handle {} here", msg.kind()),
        )
    }
}

impl Prover for OptimalClassicalProver {
    fn protocol_id(&self) -> ProtocolId {
        self.protocol
    }

    fn respond(&mut self, msg: &Message, rng: &mut ChaCha12Rng) -> Result<Message> {
        match (self.protocol, msg) {
            (ProtocolId::Kcvy | ProtocolId::Simplified, Message::Key { key }) => {
                let x = Self::pick_preimage(key)?;
                let y = tcf::eval(key, &x)?;
                self.n = key.domain_bits();
                self.known_bit = Some(match tcf::preimage_type(key, &x)? {
                    0 => 0xf0, // marker: use r0 once it arrives
                    _ => 0xf1,
                });
                self.x = Some(x);
                Ok(Message::Y { value: y })
            }
            (ProtocolId::Kcvy | ProtocolId::Simplified, Message::R { r0, r1 }) => {
                let x = self.x.as_ref().ok_or_else(|| self.unexpected(msg))?;
                let r = match self.known_bit {
                    Some(0xf0) => r0,
                    Some(0xf1) => r1,
                    _ => return Err(self.unexpected(msg)),
                };
                self.known_bit = Some(r.dot(x));
                Ok(Message::D {
                    value: Bits::zeros(self.n),
                })
            }
            (
                ProtocolId::Kcvy,
                Message::Branch {
                    value: BranchChoice::Preimage,
                },
            ) => {
                let x = self.x.as_ref().ok_or_else(|| self.unexpected(msg))?;
                Ok(Message::X { value: x.clone() })
            }
            (ProtocolId::KlvyChsh, Message::Ciphertext { ct }) => {
                // Homomorphically answer a = 0; with b = 0 this wins unless
                // m = 1 and x = 1.
                let answer = mock_qhe::eval_classical(ct, |_| 0, rng);
                self.known_bit = Some(0);
                Ok(Message::Ciphertext { ct: answer })
            }
            (_, Message::Challenge { m }) if *m <= 1 => {
                let b = match (self.protocol, self.known_bit) {
                    (ProtocolId::KlvyChsh, Some(_)) => 0,
                    (_, Some(w)) if w <= 1 => w,
                    _ => return Err(self.unexpected(msg)),
                };
                Ok(Message::Response { b })
            }
            _ => Err(self.unexpected(msg)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::experiment_rng;
    use crate::suite::simplified_c_hat;
    use crate::tcf::TcfFamily;

    /// Exhaustive oracle for the 3/4 value: average the strategy's success
    /// over every (r0, r1, m) against the real decision rule.
    #[test]
    fn simplified_strategy_averages_exactly_three_quarters() {
        for n in [2u32, 3] {
            let mut rng = experiment_rng(5, n as u64);
            let (key, _) = tcf::gen(n, TcfFamily::Toy, &mut rng).unwrap();
            let x = OptimalClassicalProver::pick_preimage(&key).unwrap();
            let claw = tcf::claw_of(&key, &x).unwrap();
            let t = tcf::preimage_type(&key, &x).unwrap();
            let d = Bits::zeros(n as usize);
            let (mut wins, mut total) = (0u64, 0u64);
            for r0v in 0..(1u64 << n) {
                for r1v in 0..(1u64 << n) {
                    let r0 = Bits::from_u64(r0v, n as usize).unwrap();
                    let r1 = Bits::from_u64(r1v, n as usize).unwrap();
                    let w = if t == 0 { r0.dot(&x) } else { r1.dot(&x) };
                    for m in 0..2u8 {
                        let c = simplified_c_hat(&r0, &r1, &claw.x0, &claw.x1, &d, m).unwrap();
                        let sign = if w == 0 { 1 } else { -1 };
                        wins += u64::from(c == sign);
                        total += 1;
                    }
                }
            }
            assert_eq!(wins * 4, total * 3, "n={n}: {wins}/{total}");
        }
    }

    /// Any fixed response table (b0, b1) that ignores the hidden selector
    /// wins at most 3/4 of the coin space.
    #[test]
    fn fixed_response_tables_cap_at_three_quarters() {
        let n = 3u32;
        let mut rng = experiment_rng(6, 0);
        let (key, _) = tcf::gen(n, TcfFamily::Toy, &mut rng).unwrap();
        let x = OptimalClassicalProver::pick_preimage(&key).unwrap();
        let claw = tcf::claw_of(&key, &x).unwrap();
        let d = Bits::zeros(n as usize);
        let mut best = 0.0f64;
        for table in 0..4u8 {
            let (b0, b1) = (table & 1, table >> 1);
            let (mut wins, mut total) = (0u64, 0u64);
            for r0v in 0..(1u64 << n) {
                for r1v in 0..(1u64 << n) {
                    let r0 = Bits::from_u64(r0v, n as usize).unwrap();
                    let r1 = Bits::from_u64(r1v, n as usize).unwrap();
                    for (m, b) in [(0u8, b0), (1u8, b1)] {
                        let c = simplified_c_hat(&r0, &r1, &claw.x0, &claw.x1, &d, m).unwrap();
                        let sign = if b == 0 { 1 } else { -1 };
                        wins += u64::from(c == sign);
                        total += 1;
                    }
                }
            }
            best = best.max(wins as f64 / total as f64);
        }
        assert!(best <= 0.75 + 1e-12, "best fixed table {best}");
    }
}
