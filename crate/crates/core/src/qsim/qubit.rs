//! Single-qubit states and rotated-basis measurement.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

use super::NORM_TOL;

/// A normalized qubit a0|0> + a1|1>.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    pub a0: Complex64,
    pub a1: Complex64,
}

impl QubitState {
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let norm_sq = a0.norm_sqr() + a1.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(norm_sq));
        }
        Ok(QubitState { a0, a1 })
    }

    pub fn basis(bit: u8) -> Self {
        if bit == 0 {
            QubitState {
                a0: Complex64::new(1.0, 0.0),
                a1: Complex64::new(0.0, 0.0),
            }
        } else {
            QubitState {
                a0: Complex64::new(0.0, 0.0),
                a1: Complex64::new(1.0, 0.0),
            }
        }
    }

    /// cos(theta)|0> + sin(theta)|1>.
    pub fn plane(theta: f64) -> Self {
        QubitState {
            a0: Complex64::new(theta.cos(), 0.0),
            a1: Complex64::new(theta.sin(), 0.0),
        }
    }

    /// Probability of outcome 0 when measured in {|theta>, |theta + pi/2>}.
    pub fn prob_zero(&self, theta: f64) -> f64 {
        let overlap = self.a0 * theta.cos() + self.a1 * theta.sin();
        overlap.norm_sqr()
    }
}

/// Measures in the basis {|theta>, |theta + pi/2>}; returns 0 on the first
/// outcome.
pub fn measure_rotated<R: Rng + ?Sized>(q: &QubitState, theta: f64, rng: &mut R) -> Result<u8> {
    let norm_sq = q.a0.norm_sqr() + q.a1.norm_sqr();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization(norm_sq));
    }
    let p0 = q.prob_zero(theta);
    Ok(if rng.random::<f64>() < p0 { 0 } else { 1 })
}
