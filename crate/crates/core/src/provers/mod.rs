//! Prover implementations: the honest quantum prover, a 3/4-optimal
//! classical strategy, and arbitrary matrix-specified Phase-B devices.

pub mod classical;
pub mod device;
pub mod honest;

pub use classical::OptimalClassicalProver;
pub use device::{device_phase_b, parity_adversary, Device, DeviceOutcomePair};
pub use honest::HonestQuantumProver;

/// Measurement angle for challenge m: pi/8 for m = 0, -pi/8 for m = 1.
pub fn challenge_angle(m: u8) -> f64 {
    if m == 0 {
        std::f64::consts::FRAC_PI_8
    } else {
        -std::f64::consts::FRAC_PI_8
    }
}
