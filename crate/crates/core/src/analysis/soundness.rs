//! Soundness-bound verification, the anti-commutator qubit test, and the
//! deviation moments of near-optimal devices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::jordan::{jordan_decompose, JordanReport};
use super::{COS_SQ_PI_8, JORDAN_TOL};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SoundnessVerdict {
    /// cos^2(pi/8) + |p_xor - 1/2| - (p0 + p1)/2. Nonnegative (within
    /// tolerance) for every device.
    pub quantum_slack: f64,
    /// 3/4 + |p_xor - 1/2|/2 - (p0 + p1)/2, defined only for devices whose
    /// blocks are all 1-dimensional.
    pub classical_slack: Option<f64>,
    /// True when the quantum bound is saturated.
    pub tight: bool,
}

pub fn soundness_check(report: &JordanReport) -> SoundnessVerdict {
    let avg = (report.p0 + report.p1) / 2.0;
    let quantum_slack = COS_SQ_PI_8 + report.delta - avg;
    let classical_slack = report
        .classical_diag
        .then(|| 0.75 + report.delta / 2.0 - avg);
    SoundnessVerdict {
        quantum_slack,
        classical_slack,
        tight: quantum_slack <= JORDAN_TOL,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnticommutatorReport {
    /// <psi| {S0,S1}^2 |psi> by dense evaluation, S_m = 2 Q_m - Id.
    pub dense: f64,
    /// sum_i t_i * 4 cos^2(2(alpha_i - beta_i)), the per-block closed form.
    pub per_block: f64,
}

/// Squared anti-commutator of the +-1 observables S_m = 2 Q_m - Id, on the
/// state. The dense route and the block closed form are computed
/// independently; near-optimal devices drive both to zero.
pub fn anticommutator_expectation(
    q0: &DMatrix<Complex64>,
    q1: &DMatrix<Complex64>,
    psi: &DVector<Complex64>,
) -> Result<AnticommutatorReport> {
    let report = jordan_decompose(q0, q1, psi)?;
    let dim = psi.len();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let two = Complex64::new(2.0, 0.0);
    let s0 = q0 * two - &id;
    let s1 = q1 * two - &id;
    let anti = &s0 * &s1 + &s1 * &s0;
    // {S0,S1} is Hermitian, so the expectation of its square is a norm.
    let dense = (&anti * psi).norm_squared();
    let per_block = report
        .blocks
        .iter()
        .map(|b| b.t * 4.0 * (2.0 * b.relative_angle()).cos().powi(2))
        .sum();
    Ok(AnticommutatorReport { dense, per_block })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviationMoments {
    /// sum_i t_i (|alpha_i - beta_i| - pi/4)^2
    pub m1: f64,
    /// sum_i t_i (alpha_i + beta_i)^2
    pub m2: f64,
    /// Total weight of blocks with an angle outside [-3pi/16, 3pi/16].
    pub offgrid: f64,
}

pub fn deviation_moments(report: &JordanReport) -> DeviationMoments {
    use std::f64::consts::FRAC_PI_4;
    let grid = 3.0 * std::f64::consts::PI / 16.0;
    let mut m = DeviationMoments {
        m1: 0.0,
        m2: 0.0,
        offgrid: 0.0,
    };
    for b in &report.blocks {
        let diff = (b.alpha - b.beta).abs();
        m.m1 += b.t * (diff - FRAC_PI_4).powi(2);
        m.m2 += b.t * (b.alpha + b.beta).powi(2);
        if b.alpha.abs() > grid || b.beta.abs() > grid {
            m.offgrid += b.t;
        }
    }
    m
}
