//! The two-phase protocol template.
//!
//! Phase A is an arbitrary classical interaction after which the verifier
//! raises a flag in {acc, rej, cont}. On cont, Phase B sends a uniform
//! challenge bit m, collects a response bit b, and accepts iff
//! (-1)^b = c_hat_m, where c_hat_m is computed from the verifier's private
//! coins and the transcript alone. Both c_hat_0 and c_hat_1 are recorded for
//! every cont execution; the parity-adversary analysis needs the pair.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Party, Result};
use crate::rng::TrialRng;
use crate::suite::mock_qhe::MockCiphertext;
use crate::tcf::TcfKey;
use crate::Bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolId {
    Kcvy,
    Simplified,
    KlvyChsh,
}

impl std::fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ProtocolId::Kcvy => "kcvy",
            ProtocolId::Simplified => "simplified",
            ProtocolId::KlvyChsh => "klvy_chsh",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for ProtocolId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kcvy" => Ok(ProtocolId::Kcvy),
            "simplified" => Ok(ProtocolId::Simplified),
            "klvy_chsh" | "klvy-chsh" => Ok(ProtocolId::KlvyChsh),
            other => Err(Error::Validation(format!("unknown protocol {other:?}"))),
        }
    }
}

/// Verifier verdict at the end of Phase A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Acc,
    Rej,
    Cont,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchChoice {
    Preimage,
    Equation,
}

/// Wire message payloads. Bit strings ride as little-endian hex with an
/// explicit width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Message {
    Key { key: TcfKey },
    Y { value: Bits },
    /// Announces the preimage test. The equation test is announced by the
    /// r-message itself, keeping the strict verifier/prover alternation.
    Branch { value: BranchChoice },
    /// Preimage-test response.
    X { value: Bits },
    R { r0: Bits, r1: Bits },
    D { value: Bits },
    Challenge { m: u8 },
    Response { b: u8 },
    Ciphertext { ct: MockCiphertext },
    Verdict {
        flag: Flag,
        #[serde(skip_serializing_if = "Option::is_none")]
        reason: Option<String>,
    },
}

impl Message {
    pub fn kind(&self) -> &'static str {
        match self {
            Message::Key { .. } => "key",
            Message::Y { .. } => "y",
            Message::Branch { .. } => "branch",
            Message::X { .. } => "x",
            Message::R { .. } => "r",
            Message::D { .. } => "d",
            Message::Challenge { .. } => "challenge",
            Message::Response { .. } => "response",
            Message::Ciphertext { .. } => "ciphertext",
            Message::Verdict { .. } => "verdict",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    V2p,
    P2v,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordedMessage {
    pub dir: Direction,
    pub payload: Message,
}

/// Classical record of one execution. The verifier's private coins are kept
/// alongside the messages but are never part of them; persistence layers
/// must not write `verifier_rand` out with the transcript.
#[derive(Debug, Clone)]
pub struct Transcript {
    pub protocol: ProtocolId,
    pub messages: Vec<RecordedMessage>,
    pub verifier_rand: serde_json::Value,
}

/// Phase-B record: challenge, response, the correct values and the verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseBRecord {
    pub m: u8,
    pub b: u8,
    pub c_hat: i8,
    pub c_hat0: i8,
    pub c_hat1: i8,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct ExecutionResult {
    pub flag: Flag,
    pub transcript: Transcript,
    pub phase_b: Option<PhaseBRecord>,
}

impl ExecutionResult {
    pub fn accepted(&self) -> bool {
        match self.flag {
            Flag::Acc => true,
            Flag::Rej => false,
            Flag::Cont => self.phase_b.as_ref().is_some_and(|r| r.accepted),
        }
    }
}

/// Accept iff (-1)^b = c_hat.
pub fn decide(c_hat: i8, b: u8) -> Result<bool> {
    if c_hat != 1 && c_hat != -1 {
        return Err(Error::Validation(format!("c_hat {c_hat} is not +-1")));
    }
    if b > 1 {
        return Err(Error::Validation(format!("response {b} is not a bit")));
    }
    let sign = if b == 0 { 1 } else { -1 };
    Ok(sign == c_hat)
}

/// What the verifier wants to do next.
pub enum VerifierAction {
    Send(Message),
    Conclude(Flag, Option<String>),
}

pub trait Verifier {
    fn protocol_id(&self) -> ProtocolId;
    /// First move of Phase A; the verifier always speaks first.
    fn begin(&mut self, rng: &mut ChaCha12Rng) -> Result<VerifierAction>;
    fn on_message(&mut self, msg: &Message, rng: &mut ChaCha12Rng) -> Result<VerifierAction>;
    /// The pair (c_hat_0, c_hat_1); defined once Phase A concluded with cont.
    fn c_hats(&self) -> Result<(i8, i8)>;
    /// Opaque record of the private coins, for leak auditing.
    fn rand_record(&self) -> serde_json::Value;
}

pub trait Prover {
    fn protocol_id(&self) -> ProtocolId;
    fn respond(&mut self, msg: &Message, rng: &mut ChaCha12Rng) -> Result<Message>;
}

/// Drives one full execution: Phase A to a flag, then Phase B on cont.
pub fn run_protocol(
    verifier: &mut dyn Verifier,
    prover: &mut dyn Prover,
    rng: &mut TrialRng,
) -> Result<ExecutionResult> {
    if verifier.protocol_id() != prover.protocol_id() {
        return Err(Error::ProtocolMismatch {
            verifier: verifier.protocol_id().to_string(),
            prover: prover.protocol_id().to_string(),
        });
    }
    let mut messages = Vec::new();
    let mut action = verifier.begin(&mut rng.verifier)?;
    let (flag, reason) = loop {
        match action {
            VerifierAction::Send(msg) => {
                messages.push(RecordedMessage {
                    dir: Direction::V2p,
                    payload: msg.clone(),
                });
                let reply = prover.respond(&msg, &mut rng.prover)?;
                messages.push(RecordedMessage {
                    dir: Direction::P2v,
                    payload: reply.clone(),
                });
                action = verifier.on_message(&reply, &mut rng.verifier)?;
            }
            VerifierAction::Conclude(flag, reason) => break (flag, reason),
        }
    };

    let phase_b = if flag == Flag::Cont {
        let m = u8::from(rng.verifier.random::<bool>());
        let challenge = Message::Challenge { m };
        messages.push(RecordedMessage {
            dir: Direction::V2p,
            payload: challenge.clone(),
        });
        let reply = prover.respond(&challenge, &mut rng.prover)?;
        messages.push(RecordedMessage {
            dir: Direction::P2v,
            payload: reply.clone(),
        });
        let b = match reply {
            Message::Response { b } if b <= 1 => b,
            other => {
                return Err(Error::violation(
                    Party::Prover,
                    format!("expected a response bit, got {}", other.kind()),
                ))
            }
        };
        let (c_hat0, c_hat1) = verifier.c_hats()?;
        let c_hat = if m == 0 { c_hat0 } else { c_hat1 };
        let accepted = decide(c_hat, b)?;
        messages.push(RecordedMessage {
            dir: Direction::V2p,
            payload: Message::Verdict {
                flag: if accepted { Flag::Acc } else { Flag::Rej },
                reason: None,
            },
        });
        Some(PhaseBRecord {
            m,
            b,
            c_hat,
            c_hat0,
            c_hat1,
            accepted,
        })
    } else {
        messages.push(RecordedMessage {
            dir: Direction::V2p,
            payload: Message::Verdict { flag, reason },
        });
        None
    };

    Ok(ExecutionResult {
        flag,
        transcript: Transcript {
            protocol: verifier.protocol_id(),
            messages,
            verifier_rand: verifier.rand_record(),
        },
        phase_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decide_matches_sign_rule() {
        assert!(decide(1, 0).unwrap());
        assert!(!decide(-1, 0).unwrap());
        assert!(decide(-1, 1).unwrap());
        assert!(!decide(1, 1).unwrap());
    }

    #[test]
    fn decide_validates_inputs() {
        assert!(matches!(decide(0, 0), Err(Error::Validation(_))));
        assert!(matches!(decide(2, 1), Err(Error::Validation(_))));
        assert!(matches!(decide(1, 2), Err(Error::Validation(_))));
    }

    #[test]
    fn message_schema_uses_snake_case_tags() {
        let m = Message::Challenge { m: 1 };
        let j = serde_json::to_value(&m).unwrap();
        assert_eq!(j["type"], "challenge");
        assert_eq!(j["m"], 1);
        let v = Message::Verdict {
            flag: Flag::Rej,
            reason: None,
        };
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["flag"], "rej");
        assert!(j.get("reason").is_none());
    }
}
