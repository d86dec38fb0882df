//! Verifier for the simplified protocol: key -> y -> (r0, r1) -> d, always
//! cont afterwards, with the answer pair derived from the trapdoor inversion
//! of y. A prover-supplied y outside the image is rejected outright; the
//! honest first message always lies in the image, so rej is the only
//! meaningful verdict there.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use crate::error::{Error, Party, Result};
use crate::protocol::{Flag, Message, ProtocolId, Verifier, VerifierAction};
use crate::tcf::{self, Claw, TcfFamily, TcfKey, TcfTrapdoor};
use crate::Bits;

use super::simplified_c_hat;

enum Stage {
    Start,
    AwaitY,
    AwaitD,
    Concluded,
}

pub struct SimplifiedVerifier {
    lambda: u32,
    family: TcfFamily,
    stage: Stage,
    sentinel: String,
    key: Option<TcfKey>,
    trapdoor: Option<TcfTrapdoor>,
    claw: Option<Claw>,
    r0: Option<Bits>,
    r1: Option<Bits>,
    d: Option<Bits>,
}

impl SimplifiedVerifier {
    pub fn new(lambda: u32, family: TcfFamily) -> Self {
        SimplifiedVerifier {
            lambda,
            family,
            stage: Stage::Start,
            sentinel: String::new(),
            key: None,
            trapdoor: None,
            claw: None,
            r0: None,
            r1: None,
            d: None,
        }
    }

    fn key(&self) -> &TcfKey {
        self.key.as_ref().expect("key set in begin")
    }
}

pub(super) fn sentinel_tag<R: Rng + ?Sized>(rng: &mut R) -> String {
    let tag: u128 = rng.random();
    format!("{tag:032x}")
}

impl Verifier for SimplifiedVerifier {
    fn protocol_id(&self) -> ProtocolId {
        ProtocolId::Simplified
    }

    fn begin(&mut self, rng: &mut ChaCha12Rng) -> Result<VerifierAction> {
        self.sentinel = sentinel_tag(rng);
        let (key, trapdoor) = tcf::gen(self.lambda, self.family, rng)?;
        self.key = Some(key.clone());
        self.trapdoor = Some(trapdoor);
        self.stage = Stage::AwaitY;
        Ok(VerifierAction::Send(Message::Key { key }))
    }

    fn on_message(&mut self, msg: &Message, rng: &mut ChaCha12Rng) -> Result<VerifierAction> {
        match (&self.stage, msg) {
            (Stage::AwaitY, Message::Y { value }) => {
                let trapdoor = self.trapdoor.as_ref().expect("trapdoor set in begin");
                match tcf::invert(trapdoor, self.key(), value) {
                    Ok(claw) => {
                        self.claw = Some(claw);
                        let n = self.key().domain_bits();
                        let r0 = Bits::uniform(n, rng);
                        let r1 = Bits::uniform(n, rng);
                        self.r0 = Some(r0.clone());
                        self.r1 = Some(r1.clone());
                        self.stage = Stage::AwaitD;
                        Ok(VerifierAction::Send(Message::R { r0, r1 }))
                    }
                    Err(Error::NoPreimage(_)) | Err(Error::Domain(_)) => {
                        self.stage = Stage::Concluded;
                        Ok(VerifierAction::Conclude(
                            Flag::Rej,
                            Some("y_not_in_image".into()),
                        ))
                    }
                    Err(e) => Err(e),
                }
            }
            (Stage::AwaitD, Message::D { value }) => {
                if value.n_bits() != self.key().domain_bits() {
                    return Err(Error::violation(Party::Prover, "d has the wrong width"));
                }
                self.d = Some(value.clone());
                self.stage = Stage::Concluded;
                Ok(VerifierAction::Conclude(Flag::Cont, None))
            }
            (_, other) => Err(Error::violation(
                Party::Prover,
                format!("unexpected {} message", other.kind()),
            )),
        }
    }

    fn c_hats(&self) -> Result<(i8, i8)> {
        let claw = self
            .claw
            .as_ref()
            .ok_or_else(|| Error::Validation("c_hats queried before cont".into()))?;
        let (r0, r1, d) = (
            self.r0.as_ref().unwrap(),
            self.r1.as_ref().unwrap(),
            self.d.as_ref().unwrap(),
        );
        Ok((
            simplified_c_hat(r0, r1, &claw.x0, &claw.x1, d, 0)?,
            simplified_c_hat(r0, r1, &claw.x0, &claw.x1, d, 1)?,
        ))
    }

    fn rand_record(&self) -> serde_json::Value {
        json!({
            "sentinel": self.sentinel,
            "trapdoor": self.trapdoor.as_ref().map(|t| serde_json::to_value(t).unwrap()),
            "claw": self.claw.as_ref().map(|c| serde_json::to_value(c).unwrap()),
        })
    }
}
