//! Run configuration shared by `run` and `serve`.

use std::path::PathBuf;

use qkit_core::error::{Error, Result};
use qkit_core::protocol::{ProtocolId, Verifier};
use qkit_core::provers::{HonestQuantumProver, OptimalClassicalProver};
use qkit_core::suite::{KcvyVerifier, KlvyChshVerifier, SimplifiedVerifier};
use qkit_core::tcf::TcfFamily;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProverKind {
    HonestQuantum,
    OptimalClassical,
    /// Matrix devices only make sense for Phase-B replay; `analyze` handles
    /// them, `run` rejects them.
    Device(PathBuf),
}

impl std::str::FromStr for ProverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest-quantum" | "honest" => Ok(ProverKind::HonestQuantum),
            "optimal-classical" | "classical" => Ok(ProverKind::OptimalClassical),
            other => match other.strip_prefix("device:") {
                Some(path) => Ok(ProverKind::Device(PathBuf::from(path))),
                None => Err(Error::Validation(format!(
                    "unknown prover {other:?}; use honest-quantum, optimal-classical or device:<path>"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub protocol: ProtocolId,
    pub prover: ProverKind,
    pub tcf: TcfFamily,
    pub n_bits: u32,
    pub trials: u64,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Validation("trials must be at least 1".into()));
        }
        if self.n_bits < 2 {
            return Err(Error::Validation("n_bits must be at least 2".into()));
        }
        if let ProverKind::Device(_) = self.prover {
            return Err(Error::Validation(
                "device provers are Phase-B-only; use `qkit analyze` to replay them".into(),
            ));
        }
        Ok(())
    }

    pub fn make_verifier(&self) -> Box<dyn Verifier> {
        make_verifier(self.protocol, self.n_bits, self.tcf)
    }

    pub fn make_prover(&self) -> Box<dyn qkit_core::protocol::Prover> {
        make_prover(self.protocol, &self.prover)
    }
}

pub fn make_verifier(protocol: ProtocolId, n_bits: u32, tcf: TcfFamily) -> Box<dyn Verifier> {
    match protocol {
        ProtocolId::Simplified => Box::new(SimplifiedVerifier::new(n_bits, tcf)),
        ProtocolId::Kcvy => Box::new(KcvyVerifier::new(n_bits, tcf)),
        ProtocolId::KlvyChsh => Box::new(KlvyChshVerifier::new()),
    }
}

pub fn make_prover(
    protocol: ProtocolId,
    kind: &ProverKind,
) -> Box<dyn qkit_core::protocol::Prover> {
    match kind {
        ProverKind::HonestQuantum => Box::new(HonestQuantumProver::new(protocol)),
        ProverKind::OptimalClassical => Box::new(OptimalClassicalProver::new(protocol)),
        ProverKind::Device(_) => unreachable!("rejected by validate"),
    }
}
