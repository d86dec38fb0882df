//! Device analysis front-end: block report, bound verdicts, optional
//! empirical replay.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qkit_core::analysis::{
    anticommutator_expectation, deviation_moments, jordan_decompose, parity_success,
    soundness_check, AnticommutatorReport, DeviationMoments, JordanReport, SoundnessVerdict,
};
use qkit_core::error::Result;
use qkit_core::provers::{device_phase_b, parity_adversary, Device};
use qkit_core::rng::experiment_rng;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmpiricalStats {
    pub trials: u64,
    /// Per-challenge frequency of outcome 0 and its Born prediction.
    pub phase_b_rate: [f64; 2],
    pub phase_b_predicted: [f64; 2],
    /// Frequency of a correct parity guess and the dense prediction.
    pub parity_rate: f64,
    pub parity_predicted: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub c_hats: (i8, i8),
    pub jordan: JordanReport,
    pub soundness: SoundnessVerdict,
    pub anticommutator: AnticommutatorReport,
    pub moments: DeviationMoments,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<EmpiricalStats>,
}

/// Runs the full analysis stack on a device under a c-hat assignment.
pub fn analyze_device(
    device: &Device,
    c_hat0: i8,
    c_hat1: i8,
    empirical_trials: Option<(u64, u64)>,
) -> Result<AnalyzeReport> {
    let q0 = device.correct_projector(0, c_hat0)?;
    let q1 = device.correct_projector(1, c_hat1)?;
    let psi = device.state();
    let jordan = jordan_decompose(&q0, &q1, psi)?;
    let soundness = soundness_check(&jordan);
    let anticommutator = anticommutator_expectation(&q0, &q1, psi)?;
    let moments = deviation_moments(&jordan);

    let empirical = match empirical_trials {
        None => None,
        Some((trials, seed)) => {
            let mut rng = experiment_rng(seed, 0);
            let mut zeros = [0u64; 2];
            for m in [0u8, 1] {
                for _ in 0..trials {
                    if device_phase_b(device, m, &mut rng)?.0 == 0 {
                        zeros[m as usize] += 1;
                    }
                }
            }
            let mut correct = 0u64;
            for _ in 0..trials {
                let pair = parity_adversary(device, c_hat0, c_hat1, &mut rng)?;
                correct += u64::from(pair.correct(c_hat0, c_hat1));
            }
            let predicted = |m: u8| (device.projector(m) * psi).norm_squared();
            Some(EmpiricalStats {
                trials,
                phase_b_rate: [
                    zeros[0] as f64 / trials as f64,
                    zeros[1] as f64 / trials as f64,
                ],
                phase_b_predicted: [predicted(0), predicted(1)],
                parity_rate: correct as f64 / trials as f64,
                parity_predicted: parity_success(&q0, &q1, psi)?,
            })
        }
    };

    Ok(AnalyzeReport {
        c_hats: (c_hat0, c_hat1),
        jordan,
        soundness,
        anticommutator,
        moments,
        empirical,
    })
}

pub fn load_device(path: &Path) -> Result<Device> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// One CSV row per block: t, alpha, beta.
pub fn write_blocks_csv(report: &JordanReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "t,alpha,beta")?;
    for block in &report.blocks {
        writeln!(out, "{},{},{}", block.t, block.alpha, block.beta)?;
    }
    Ok(())
}
