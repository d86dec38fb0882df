//! Numerical analysis of Phase-B devices: block decomposition of the two
//! challenge measurements, success/parity formulas, soundness bounds, the
//! anti-commutator qubit test and the underlying trigonometric inequalities.

pub mod jordan;
pub mod soundness;
pub mod trig;

pub use jordan::{jordan_decompose, parity_success, JordanBlock, JordanReport};
pub use soundness::{
    anticommutator_expectation, deviation_moments, soundness_check, AnticommutatorReport,
    DeviationMoments, SoundnessVerdict,
};
pub use trig::{ine2_slack, main_inequality_slack, trig_scan, TrigScan};

/// cos^2(pi/8) = (2 + sqrt 2)/4, the optimal quantum success probability.
pub const COS_SQ_PI_8: f64 = (2.0 + std::f64::consts::SQRT_2) / 4.0;

/// Identity tolerance for the decomposition invariants.
pub const JORDAN_TOL: f64 = 1e-9;
