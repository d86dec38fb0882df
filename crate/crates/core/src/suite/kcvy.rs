//! Verifier for the KCVY protocol. After the first round it flips a fair
//! coin: the preimage test asks for some x in {x0, x1} and concludes with
//! acc/rej; the equation test sends one string r (carried in both slots of
//! the r-message), collects d, and continues to Phase B with the
//! decision-table answers.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use crate::error::{Error, Party, Result};
use crate::protocol::{BranchChoice, Flag, Message, ProtocolId, Verifier, VerifierAction};
use crate::tcf::{self, Claw, TcfFamily, TcfKey, TcfTrapdoor};
use crate::Bits;

use super::kcvy_c_hat;
use super::simplified::sentinel_tag;

enum Stage {
    Start,
    AwaitY,
    AwaitPreimage,
    AwaitD,
    Concluded,
}

pub struct KcvyVerifier {
    lambda: u32,
    family: TcfFamily,
    stage: Stage,
    sentinel: String,
    key: Option<TcfKey>,
    trapdoor: Option<TcfTrapdoor>,
    claw: Option<Claw>,
    branch: Option<BranchChoice>,
    r: Option<Bits>,
    d: Option<Bits>,
}

impl KcvyVerifier {
    pub fn new(lambda: u32, family: TcfFamily) -> Self {
        KcvyVerifier {
            lambda,
            family,
            stage: Stage::Start,
            sentinel: String::new(),
            key: None,
            trapdoor: None,
            claw: None,
            branch: None,
            r: None,
            d: None,
        }
    }

    pub fn branch(&self) -> Option<BranchChoice> {
        self.branch
    }

    fn key(&self) -> &TcfKey {
        self.key.as_ref().expect("key set in begin")
    }
}

impl Verifier for KcvyVerifier {
    fn protocol_id(&self) -> ProtocolId {
        ProtocolId::Kcvy
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
                let claw = match tcf::invert(trapdoor, self.key(), value) {
                    Ok(claw) => claw,
                    Err(Error::NoPreimage(_)) | Err(Error::Domain(_)) => {
                        self.stage = Stage::Concluded;
                        return Ok(VerifierAction::Conclude(
                            Flag::Rej,
                            Some("y_not_in_image".into()),
                        ));
                    }
                    Err(e) => return Err(e),
                };
                self.claw = Some(claw);
                if rng.random::<bool>() {
                    self.branch = Some(BranchChoice::Preimage);
                    self.stage = Stage::AwaitPreimage;
                    Ok(VerifierAction::Send(Message::Branch {
                        value: BranchChoice::Preimage,
                    }))
                } else {
                    self.branch = Some(BranchChoice::Equation);
                    let r = Bits::uniform(self.key().domain_bits(), rng);
                    self.r = Some(r.clone());
                    self.stage = Stage::AwaitD;
                    Ok(VerifierAction::Send(Message::R {
                        r0: r.clone(),
                        r1: r,
                    }))
                }
            }
            (Stage::AwaitPreimage, Message::X { value }) => {
                let claw = self.claw.as_ref().expect("claw set on y");
                self.stage = Stage::Concluded;
                let flag = if *value == claw.x0 || *value == claw.x1 {
                    Flag::Acc
                } else {
                    Flag::Rej
                };
                Ok(VerifierAction::Conclude(flag, None))
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
        let (r, d) = (self.r.as_ref().unwrap(), self.d.as_ref().unwrap());
        Ok((
            kcvy_c_hat(r, &claw.x0, &claw.x1, d, 0)?,
            kcvy_c_hat(r, &claw.x0, &claw.x1, d, 1)?,
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
