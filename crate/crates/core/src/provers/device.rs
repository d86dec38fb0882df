//! Arbitrary Phase-B devices: a prepared state and one two-outcome
//! projective measurement per challenge.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{measure_projective, validate_projector};

/// Analysis-grade dimension cap; eigendecompositions stay exact-grade here.
pub const MAX_DEVICE_DIM: usize = 64;

/// (state, {proj m=0}, {proj m=1}); `proj_m` is the projector onto outcome
/// b = 0 for challenge m, the outcome-1 projector being its complement.
#[derive(Debug, Clone)]
pub struct Device {
    state: DVector<Complex64>,
    proj0: DMatrix<Complex64>,
    proj1: DMatrix<Complex64>,
}

impl Device {
    pub fn new(
        state: DVector<Complex64>,
        proj0: DMatrix<Complex64>,
        proj1: DMatrix<Complex64>,
    ) -> Result<Self> {
        let dim = state.len();
        if dim == 0 || dim > MAX_DEVICE_DIM {
            return Err(Error::Validation(format!(
                "device dimension {dim} outside [1, {MAX_DEVICE_DIM}]"
            )));
        }
        if proj0.nrows() != dim || proj1.nrows() != dim {
            return Err(Error::Validation("projector dimensions disagree with state".into()));
        }
        validate_projector(&proj0)?;
        validate_projector(&proj1)?;
        let norm_sq = state.norm_squared();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::Normalization(norm_sq));
        }
        Ok(Device { state, proj0, proj1 })
    }

    pub fn dim(&self) -> usize {
        self.state.len()
    }

    pub fn state(&self) -> &DVector<Complex64> {
        &self.state
    }

    /// Projector onto outcome 0 for challenge m.
    pub fn projector(&self, m: u8) -> &DMatrix<Complex64> {
        if m == 0 {
            &self.proj0
        } else {
            &self.proj1
        }
    }

    /// The "correct outcome" projector Q_m = Pi^m restricted to the outcome
    /// matching c_hat_m.
    pub fn correct_projector(&self, m: u8, c_hat: i8) -> Result<DMatrix<Complex64>> {
        if c_hat != 1 && c_hat != -1 {
            return Err(Error::Validation(format!("c_hat {c_hat} is not +-1")));
        }
        let p = self.projector(m);
        Ok(if c_hat == 1 {
            p.clone()
        } else {
            DMatrix::identity(self.dim(), self.dim()) - p
        })
    }

    /// The two-dimensional device saturating the quantum bound: measurement
    /// directions at +pi/8 and -pi/8 around the prepared state.
    pub fn canonical_optimal() -> Device {
        let f8 = std::f64::consts::FRAC_PI_8;
        let state = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        Device {
            state,
            proj0: line_projector(f8),
            proj1: line_projector(-f8),
        }
    }

    /// Haar-ish random device: random projector ranks and a random state,
    /// complex or real entries.
    pub fn random<R: Rng + ?Sized>(dim: usize, complex: bool, rng: &mut R) -> Result<Device> {
        let rank0 = rng.random_range(1..dim);
        let rank1 = rng.random_range(1..dim);
        let proj0 = random_projector(dim, rank0, complex, rng);
        let proj1 = random_projector(dim, rank1, complex, rng);
        let state = random_state(dim, complex, rng);
        Device::new(state, proj0, proj1)
    }
}

/// |v(theta)><v(theta)| for v(theta) = (cos theta, sin theta).
pub fn line_projector(theta: f64) -> DMatrix<Complex64> {
    let (c, s) = (theta.cos(), theta.sin());
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c * c, 0.0),
            Complex64::new(c * s, 0.0),
            Complex64::new(c * s, 0.0),
            Complex64::new(s * s, 0.0),
        ],
    )
}

pub fn random_state<R: Rng + ?Sized>(dim: usize, complex: bool, rng: &mut R) -> DVector<Complex64> {
    let mut v = DVector::from_fn(dim, |_, _| {
        let re: f64 = rng.sample(rand_distr_standard());
        let im: f64 = if complex {
            rng.sample(rand_distr_standard())
        } else {
            0.0
        };
        Complex64::new(re, im)
    });
    let scale = Complex64::new(v.norm().recip(), 0.0);
    v *= scale;
    v
}

pub fn random_projector<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    complex: bool,
    rng: &mut R,
) -> DMatrix<Complex64> {
    // Orthonormalize a random Gaussian matrix and keep `rank` columns.
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(rand_distr_standard());
        let im: f64 = if complex {
            rng.sample(rand_distr_standard())
        } else {
            0.0
        };
        Complex64::new(re, im)
    });
    let q = g.qr().q();
    let basis = q.columns(0, rank);
    let p = basis * basis.adjoint();
    // Symmetrize to wipe floating-point drift.
    
    (&p + p.adjoint()) * Complex64::new(0.5, 0.0)
}

fn rand_distr_standard() -> rand::distr::StandardUniform {
    rand::distr::StandardUniform
}

// --- serialization ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DeviceWire {
    dim: usize,
    state: Vec<[f64; 2]>,
    proj0: Vec<Vec<[f64; 2]>>,
    proj1: Vec<Vec<[f64; 2]>>,
}

fn matrix_to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn rows_to_matrix(rows: &[Vec<[f64; 2]>], dim: usize) -> Result<DMatrix<Complex64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Validation("matrix rows do not match dim".into()));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

impl Serialize for Device {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DeviceWire {
            dim: self.dim(),
            state: self.state.iter().map(|z| [z.re, z.im]).collect(),
            proj0: matrix_to_rows(&self.proj0),
            proj1: matrix_to_rows(&self.proj1),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Device {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = DeviceWire::deserialize(d)?;
        if wire.state.len() != wire.dim {
            return Err(serde::de::Error::custom("state length does not match dim"));
        }
        let state = DVector::from_iterator(
            wire.dim,
            wire.state.iter().map(|[re, im]| Complex64::new(*re, *im)),
        );
        let proj0 = rows_to_matrix(&wire.proj0, wire.dim).map_err(serde::de::Error::custom)?;
        let proj1 = rows_to_matrix(&wire.proj1, wire.dim).map_err(serde::de::Error::custom)?;
        Device::new(state, proj0, proj1).map_err(serde::de::Error::custom)
    }
}

// --- measurements -----------------------------------------------------------

/// Born-rule Phase-B answer: outcome of {Pi^m_0, Pi^m_1} on the device state.
pub fn device_phase_b<R: Rng + ?Sized>(
    device: &Device,
    m: u8,
    rng: &mut R,
) -> Result<(u8, DVector<Complex64>)> {
    if m > 1 {
        return Err(Error::Validation(format!("challenge {m} is not a bit")));
    }
    measure_projective(device.state(), device.projector(m), rng)
}

/// Outcomes of measuring both challenges in sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviceOutcomePair {
    pub b0: u8,
    pub b1: u8,
    pub parity: u8,
}

impl DeviceOutcomePair {
    /// The guess (-1)^(b0+b1) is correct when it matches c_hat0 * c_hat1.
    pub fn correct(&self, c_hat0: i8, c_hat1: i8) -> bool {
        let guess = if self.parity == 0 { 1 } else { -1 };
        guess == c_hat0 * c_hat1
    }
}

/// Measures {Pi^0_b}, then {Pi^1_b} on the post-measurement state, and
/// returns b0, b1 and their parity.
pub fn parity_adversary<R: Rng + ?Sized>(
    device: &Device,
    c_hat0: i8,
    c_hat1: i8,
    rng: &mut R,
) -> Result<DeviceOutcomePair> {
    if c_hat0.abs() != 1 || c_hat1.abs() != 1 {
        return Err(Error::Validation("c_hats must be +-1".into()));
    }
    let (b0, post) = measure_projective(device.state(), device.projector(0), rng)?;
    let (b1, _) = measure_projective(&post, device.projector(1), rng)?;
    Ok(DeviceOutcomePair {
        b0,
        b1,
        parity: b0 ^ b1,
    })
}
