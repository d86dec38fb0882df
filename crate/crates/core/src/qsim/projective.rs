//! Projective measurement on dense vectors, for matrix-specified devices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

use super::{NORM_TOL, PROJECTOR_TOL};

/// Checks P = P^dagger and P^2 = P within [`PROJECTOR_TOL`].
pub fn validate_projector(p: &DMatrix<Complex64>) -> Result<()> {
    if !p.is_square() {
        return Err(Error::Validation("projector is not square".into()));
    }
    let herm_err = (p - p.adjoint()).norm();
    if herm_err > PROJECTOR_TOL {
        return Err(Error::Validation(format!(
            "projector is not Hermitian (deviation {herm_err:.2e})"
        )));
    }
    let idem_err = (p * p - p).norm();
    if idem_err > PROJECTOR_TOL {
        return Err(Error::Validation(format!(
            "projector is not idempotent (deviation {idem_err:.2e})"
        )));
    }
    Ok(())
}

/// Born-rule measurement of {P, Id - P}: outcome 0 has probability
/// <psi|P|psi>, and the post-state is the normalized projection.
pub fn measure_projective<R: Rng + ?Sized>(
    state: &DVector<Complex64>,
    p: &DMatrix<Complex64>,
    rng: &mut R,
) -> Result<(u8, DVector<Complex64>)> {
    validate_projector(p)?;
    if p.nrows() != state.len() {
        return Err(Error::Validation("projector and state dimensions differ".into()));
    }
    let norm_sq = state.norm_squared();
    if (norm_sq - 1.0).abs() > NORM_TOL * state.len() as f64 {
        return Err(Error::Normalization(norm_sq));
    }
    let projected = p * state;
    let p0 = projected.norm_squared().clamp(0.0, 1.0);
    let outcome = if rng.random::<f64>() < p0 { 0 } else { 1 };
    let post = if outcome == 0 {
        let scale = Complex64::new(projected.norm().recip(), 0.0);
        &projected * scale
    } else {
        let rest = state - &projected;
        let scale = Complex64::new(rest.norm().recip(), 0.0);
        &rest * scale
    };
    Ok((outcome, post))
}
