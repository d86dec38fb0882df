//! Seeded trial execution and JSONL transcript persistence.
//!
//! Transcripts are a pure function of (seed, config): trial i draws from the
//! ChaCha streams (seed, 4i) and (seed, 4i+1), and records are written in
//! trial order whatever the worker count.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qkit_core::error::Result;
use qkit_core::protocol::{
    run_protocol, BranchChoice, ExecutionResult, Flag, Message, RecordedMessage,
};
use qkit_core::rng::TrialRng;

use crate::config::RunConfig;
use crate::stats::{wilson_interval, BranchStats, FlagCounts, RunSummary, Z99};

/// One line of the transcript file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub protocol: String,
    pub seed: u64,
    pub trial: u64,
    pub flag: Flag,
    pub messages: Vec<RecordedMessage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_hat0: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_hat1: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accepted: Option<bool>,
}

impl TranscriptRecord {
    pub fn from_execution(seed: u64, trial: u64, result: &ExecutionResult) -> Self {
        let pb = result.phase_b.as_ref();
        TranscriptRecord {
            protocol: result.transcript.protocol.to_string(),
            seed,
            trial,
            flag: result.flag,
            messages: result.transcript.messages.clone(),
            m: pb.map(|p| p.m),
            b: pb.map(|p| p.b),
            c_hat0: pb.map(|p| p.c_hat0),
            c_hat1: pb.map(|p| p.c_hat1),
            accepted: pb.map(|p| p.accepted),
        }
    }
}

/// Which KCVY branch a transcript took, read off the message record.
pub fn branch_of(result: &ExecutionResult) -> Option<BranchChoice> {
    for msg in &result.transcript.messages {
        match msg.payload {
            Message::Branch { .. } => return Some(BranchChoice::Preimage),
            Message::R { .. } => return Some(BranchChoice::Equation),
            _ => {}
        }
    }
    None
}

/// Executes one seeded trial.
pub fn run_trial(config: &RunConfig, trial: u64) -> Result<ExecutionResult> {
    let mut verifier = config.make_verifier();
    let mut prover = config.make_prover();
    let mut rng = TrialRng::new(config.seed, trial);
    run_protocol(verifier.as_mut(), prover.as_mut(), &mut rng)
}

/// Record for a trial that aborted on a transport violation.
pub fn abort_record(config: &RunConfig, trial: u64) -> TranscriptRecord {
    TranscriptRecord {
        protocol: config.protocol.to_string(),
        seed: config.seed,
        trial,
        flag: Flag::Rej,
        messages: Vec::new(),
        m: None,
        b: None,
        c_hat0: None,
        c_hat1: None,
        accepted: None,
    }
}

pub fn run_summary_accumulator() -> SummaryAccumulator {
    SummaryAccumulator::new()
}

/// Accumulates a summary while records stream out in trial order.
pub struct SummaryAccumulator {
    accepts: u64,
    flags: FlagCounts,
    pre: (u64, u64),
    eq: (u64, u64),
}

impl SummaryAccumulator {
    fn new() -> Self {
        SummaryAccumulator {
            accepts: 0,
            flags: FlagCounts {
                acc: 0,
                rej: 0,
                cont: 0,
            },
            pre: (0, 0),
            eq: (0, 0),
        }
    }

    pub fn push(&mut self, result: &ExecutionResult) {
        let accepted = result.accepted();
        self.accepts += u64::from(accepted);
        match result.flag {
            Flag::Acc => self.flags.acc += 1,
            Flag::Rej => self.flags.rej += 1,
            Flag::Cont => self.flags.cont += 1,
        }
        match branch_of(result) {
            Some(BranchChoice::Preimage) => {
                self.pre.0 += 1;
                self.pre.1 += u64::from(accepted);
            }
            Some(BranchChoice::Equation) => {
                self.eq.0 += 1;
                self.eq.1 += u64::from(accepted);
            }
            None => {}
        }
    }

    pub fn finish(self, config: &RunConfig) -> RunSummary {
        let branch = |pair: (u64, u64)| {
            (pair.0 > 0).then(|| BranchStats {
                trials: pair.0,
                accepts: pair.1,
                rate: pair.1 as f64 / pair.0 as f64,
            })
        };
        let kcvy = config.protocol == qkit_core::protocol::ProtocolId::Kcvy;
        RunSummary {
            protocol: config.protocol.to_string(),
            trials: config.trials,
            accepts: self.accepts,
            flag_counts: self.flags,
            success_rate: self.accepts as f64 / config.trials as f64,
            wilson_99: wilson_interval(self.accepts, config.trials, Z99),
            preimage_branch: if kcvy { branch(self.pre) } else { None },
            equation_branch: if kcvy { branch(self.eq) } else { None },
        }
    }
}

/// Runs all trials, streaming JSONL records to `out` in trial order.
pub fn run_all(config: &RunConfig, mut out: Option<&mut dyn Write>) -> Result<RunSummary> {
    config.validate()?;
    let mut acc = SummaryAccumulator::new();
    if config.jobs <= 1 {
        for trial in 0..config.trials {
            let result = run_trial(config, trial)?;
            acc.push(&result);
            if let Some(w) = out.as_deref_mut() {
                let record = TranscriptRecord::from_execution(config.seed, trial, &result);
                serde_json::to_writer(&mut *w, &record)?;
                w.write_all(b"\n")?;
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| qkit_core::Error::Validation(format!("worker pool: {e}")))?;
        const CHUNK: u64 = 1024;
        let mut start = 0;
        while start < config.trials {
            let end = (start + CHUNK).min(config.trials);
            let results: Vec<Result<ExecutionResult>> = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|trial| run_trial(config, trial))
                    .collect()
            });
            for (offset, result) in results.into_iter().enumerate() {
                let result = result?;
                acc.push(&result);
                if let Some(w) = out.as_deref_mut() {
                    let record = TranscriptRecord::from_execution(
                        config.seed,
                        start + offset as u64,
                        &result,
                    );
                    serde_json::to_writer(&mut *w, &record)?;
                    w.write_all(b"\n")?;
                }
            }
            start = end;
        }
    }
    Ok(acc.finish(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ProverKind;
    use qkit_core::protocol::ProtocolId;
    use qkit_core::tcf::TcfFamily;

    fn base_config() -> RunConfig {
        RunConfig {
            protocol: ProtocolId::Simplified,
            prover: ProverKind::HonestQuantum,
            tcf: TcfFamily::Toy,
            n_bits: 3,
            trials: 200,
            seed: 11,
            output_path: None,
            jobs: 1,
        }
    }

    #[test]
    fn transcripts_are_deterministic_and_parallel_invariant() {
        let mut one = Vec::new();
        let mut two = Vec::new();
        let config = base_config();
        let s1 = run_all(&config, Some(&mut one)).unwrap();
        let mut parallel = config.clone();
        parallel.jobs = 4;
        let s2 = run_all(&parallel, Some(&mut two)).unwrap();
        assert_eq!(one, two);
        assert_eq!(s1.accepts, s2.accepts);
        assert!(one.len() > 1000);
    }

    #[test]
    fn summary_counts_are_consistent() {
        let config = base_config();
        let summary = run_all(&config, None).unwrap();
        assert_eq!(summary.trials, 200);
        assert!(summary.accepts <= summary.trials);
        let (lo, hi) = summary.wilson_99;
        assert!(lo <= summary.success_rate && summary.success_rate <= hi);
        let f = &summary.flag_counts;
        assert_eq!(f.acc + f.rej + f.cont, 200);
    }

    #[test]
    fn device_provers_are_rejected_for_runs() {
        let mut config = base_config();
        config.prover = ProverKind::Device("dev.json".into());
        assert!(run_all(&config, None).is_err());
    }

    #[test]
    fn kcvy_summaries_split_branches() {
        let mut config = base_config();
        config.protocol = ProtocolId::Kcvy;
        config.trials = 400;
        let summary = run_all(&config, None).unwrap();
        let pre = summary.preimage_branch.unwrap();
        let eq = summary.equation_branch.unwrap();
        assert_eq!(pre.trials + eq.trials, 400);
        assert_eq!(pre.rate, 1.0);
    }

    #[test]
    fn records_follow_the_jsonl_schema() {
        let config = base_config();
        let mut buf = Vec::new();
        run_all(
            &RunConfig {
                trials: 3,
                ..config
            },
            Some(&mut buf),
        )
        .unwrap();
        for line in String::from_utf8(buf).unwrap().lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["protocol"], "simplified");
            assert_eq!(v["seed"], 11);
            assert!(v["trial"].is_u64());
            assert_eq!(v["flag"], "cont");
            assert!(v["messages"].is_array());
            assert!(v["c_hat0"].as_i64().unwrap().abs() == 1);
            assert!(v["accepted"].is_boolean());
            assert!(v.get("verifier_rand").is_none());
        }
    }
}
