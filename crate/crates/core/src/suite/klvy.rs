//! Verifier for compiled CHSH: it encrypts its half of the game input,
//! expects an encrypted answer back, and always continues to Phase B.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use crate::error::{Error, Party, Result};
use crate::protocol::{Flag, Message, ProtocolId, Verifier, VerifierAction};

use super::klvy_c_hat;
use super::mock_qhe::{self, SecretKey};
use super::simplified::sentinel_tag;

enum Stage {
    Start,
    AwaitAnswer,
    Concluded,
}

pub struct KlvyChshVerifier {
    stage: Stage,
    sentinel: String,
    sk: Option<SecretKey>,
    x: u8,
    a: Option<u8>,
}

impl KlvyChshVerifier {
    pub fn new() -> Self {
        KlvyChshVerifier {
            stage: Stage::Start,
            sentinel: String::new(),
            sk: None,
            x: 0,
            a: None,
        }
    }
}

impl Default for KlvyChshVerifier {
    fn default() -> Self {
        Self::new()
    }
}

impl Verifier for KlvyChshVerifier {
    fn protocol_id(&self) -> ProtocolId {
        ProtocolId::KlvyChsh
    }

    fn begin(&mut self, rng: &mut ChaCha12Rng) -> Result<VerifierAction> {
        self.sentinel = sentinel_tag(rng);
        let sk = mock_qhe::gen_sk(rng);
        self.x = u8::from(rng.random::<bool>());
        let ct = mock_qhe::enc(&sk, self.x, rng);
        self.sk = Some(sk);
        self.stage = Stage::AwaitAnswer;
        Ok(VerifierAction::Send(Message::Ciphertext { ct }))
    }

    fn on_message(&mut self, msg: &Message, _rng: &mut ChaCha12Rng) -> Result<VerifierAction> {
        match (&self.stage, msg) {
            (Stage::AwaitAnswer, Message::Ciphertext { ct }) => {
                let sk = self.sk.as_ref().expect("sk set in begin");
                match mock_qhe::dec(sk, ct) {
                    Ok(a) => {
                        self.a = Some(a);
                        self.stage = Stage::Concluded;
                        Ok(VerifierAction::Conclude(Flag::Cont, None))
                    }
                    Err(Error::Integrity(_)) => {
                        self.stage = Stage::Concluded;
                        Ok(VerifierAction::Conclude(
                            Flag::Rej,
                            Some("undecryptable_answer".into()),
                        ))
                    }
                    Err(e) => Err(e),
                }
            }
            (_, other) => Err(Error::violation(
                Party::Prover,
                format!("unexpected {} message", other.kind()),
            )),
        }
    }

    fn c_hats(&self) -> Result<(i8, i8)> {
        let a = self
            .a
            .ok_or_else(|| Error::Validation("c_hats queried before cont".into()))?;
        Ok((klvy_c_hat(a, self.x, 0), klvy_c_hat(a, self.x, 1)))
    }

    fn rand_record(&self) -> serde_json::Value {
        json!({
            "sentinel": self.sentinel,
            "x": self.x,
            "a": self.a,
        })
    }
}
