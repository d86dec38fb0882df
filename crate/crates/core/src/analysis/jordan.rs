//! Block decomposition of two projections, anchored to a state.
//!
//! Two orthogonal projections Q0, Q1 decompose the space into invariant
//! blocks of dimension at most 2; in each 2-dimensional block both restrict
//! to rank-1 projectors whose directions differ by the block's principal
//! angle. The angles (alpha_i, beta_i) reported here are measured in the
//! basis anchored at the normalized state projection u_i, so that
//!
//!   p0    = sum_i t_i cos^2(alpha_i),          t_i = |<u_i|psi>|^2,
//!   p1    = sum_i t_i cos^2(beta_i),
//!   p_xor = sum_i t_i cos^2(alpha_i - beta_i),
//!
//! all agree with direct matrix evaluation. A state component whose phase is
//! incoherent with the block's real structure cannot be anchored this way;
//! such a block is split into its two real sub-planes (same principal angle,
//! weights given by the real and imaginary parts), which restores the
//! identities exactly.
//!
//! Algorithm: eigendecompose Q0 Q1 Q0 on range(Q0). Interior eigenvalues
//! lambda = cos^2(principal angle) yield 2-dim blocks, pairing each
//! eigenvector with its normalized Q1-complement; eigenvalues at 0 or 1 and
//! the leftover kernel/cokernel directions yield 1-dim blocks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::validate_projector;

use super::{COS_SQ_PI_8, JORDAN_TOL};

/// Eigenvalues within this distance of 0 or 1 produce 1-dim blocks.
const SPLIT_TOL: f64 = 1e-9;
/// Block weights below this are treated as unoccupied by the state.
const ZERO_WEIGHT: f64 = 1e-12;
/// Relative phase-incoherence threshold for state anchoring.
const COHERENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JordanBlock {
    pub dim: usize,
    /// Weight of the state in this block.
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    /// One or two orthonormal D-dim vectors, [re, im] per entry.
    pub basis: Vec<Vec<[f64; 2]>>,
}

impl JordanBlock {
    pub fn relative_angle(&self) -> f64 {
        self.alpha - self.beta
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JordanReport {
    pub blocks: Vec<JordanBlock>,
    pub p0: f64,
    pub p1: f64,
    pub p_xor: f64,
    /// |p_xor - 1/2|, the parity adversary's advantage.
    pub delta: f64,
    /// cos^2(pi/8) + delta - (p0 + p1)/2; nonnegative up to tolerance.
    pub quantum_slack: f64,
    /// True when every block is 1-dimensional (a classical device).
    pub classical_diag: bool,
    /// Frobenius distance between each projector and its per-block
    /// reconstruction, reported for auditability.
    pub reconstruction_error: [f64; 2],
}

fn vector_to_wire(v: &DVector<Complex64>) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Folds an angle into [-pi/2, pi/2); projector directions are lines, so
/// angles are only meaningful modulo pi.
fn wrap_half_pi(x: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    let mut v = x % PI;
    if v >= FRAC_PI_2 {
        v -= PI;
    } else if v < -FRAC_PI_2 {
        v += PI;
    }
    v
}

struct PendingBlock {
    /// Orthonormal complex basis (1 or 2 columns).
    basis: Vec<DVector<Complex64>>,
    /// Direction angles of q0 and q1 within the basis (lines, mod pi);
    /// for 1-dim blocks these are 0 or pi/2 codes for "in range" / "in kernel".
    phi0: f64,
    phi1: f64,
}

fn validate_inputs(
    q0: &DMatrix<Complex64>,
    q1: &DMatrix<Complex64>,
    psi: &DVector<Complex64>,
) -> Result<usize> {
    validate_projector(q0)?;
    validate_projector(q1)?;
    let dim = psi.len();
    if q0.nrows() != dim || q1.nrows() != dim {
        return Err(Error::Validation("projector and state dimensions differ".into()));
    }
    if dim > crate::provers::device::MAX_DEVICE_DIM {
        return Err(Error::Validation(format!(
            "dimension {dim} exceeds the analysis cap"
        )));
    }
    let norm_sq = psi.norm_squared();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(norm_sq));
    }
    Ok(dim)
}

/// Orthonormal eigenbasis columns of a Hermitian matrix with eigenvalue
/// above/below 0.5, i.e. the range and kernel of a projector.
fn projector_range(p: &DMatrix<Complex64>) -> (Vec<DVector<Complex64>>, Vec<DVector<Complex64>>) {
    let eig = p.clone().symmetric_eigen();
    let mut range = Vec::new();
    let mut kernel = Vec::new();
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        let col = DVector::from_column_slice(eig.eigenvectors.column(i).as_slice());
        if lambda > 0.5 {
            range.push(col);
        } else {
            kernel.push(col);
        }
    }
    (range, kernel)
}

pub fn jordan_decompose(
    q0: &DMatrix<Complex64>,
    q1: &DMatrix<Complex64>,
    psi: &DVector<Complex64>,
) -> Result<JordanReport> {
    let dim = validate_inputs(q0, q1, psi)?;
    let mut pending: Vec<PendingBlock> = Vec::new();

    // Blocks meeting range(Q0): eigenvectors of Q0 Q1 Q0 restricted there.
    let (range0, _) = projector_range(q0);
    if !range0.is_empty() {
        let r0 = range0.len();
        let v0 = DMatrix::from_columns(&range0.to_vec());
        let m = v0.adjoint() * q1 * &v0;
        let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = m.symmetric_eigen();
        for j in 0..r0 {
            let lambda = eig.eigenvalues[j].clamp(0.0, 1.0);
            let w = eig.eigenvectors.column(j);
            let v: DVector<Complex64> = &v0 * DVector::from_column_slice(w.as_slice());
            if lambda >= 1.0 - SPLIT_TOL {
                // v lies in both ranges.
                pending.push(PendingBlock {
                    basis: vec![v],
                    phi0: 0.0,
                    phi1: 0.0,
                });
            } else if lambda <= SPLIT_TOL {
                // v is in range(Q0) and kernel(Q1).
                pending.push(PendingBlock {
                    basis: vec![v],
                    phi0: 0.0,
                    phi1: std::f64::consts::FRAC_PI_2,
                });
            } else {
                // Pair v with the normalized Q1-complement.
                let q1v = q1 * &v;
                let mut e2 = &q1v - &v * Complex64::new(lambda, 0.0);
                let mu = e2.norm();
                e2 *= Complex64::new(mu.recip(), 0.0);
                let delta = lambda.sqrt().clamp(0.0, 1.0).acos();
                pending.push(PendingBlock {
                    basis: vec![v, e2],
                    phi0: 0.0,
                    phi1: delta,
                });
            }
        }
    }

    // Leftover space: kernel of Q0 minus the directions already consumed.
    let mut used = DMatrix::<Complex64>::zeros(dim, dim);
    for block in &pending {
        for b in &block.basis {
            used += b * b.adjoint();
        }
    }
    let complement = DMatrix::identity(dim, dim) - &used;
    let (free, _) = projector_range(&complement);
    if !free.is_empty() {
        let vw = DMatrix::from_columns(&free.to_vec());
        let mw = vw.adjoint() * q1 * &vw;
        let mw = (&mw + mw.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = mw.symmetric_eigen();
        for j in 0..free.len() {
            let lambda = eig.eigenvalues[j];
            let w = eig.eigenvectors.column(j);
            let v: DVector<Complex64> = &vw * DVector::from_column_slice(w.as_slice());
            let phi1 = if lambda > 0.5 {
                0.0
            } else {
                std::f64::consts::FRAC_PI_2
            };
            pending.push(PendingBlock {
                basis: vec![v],
                phi0: std::f64::consts::FRAC_PI_2,
                phi1,
            });
        }
    }

    // Reconstruction audit: the block pieces must tile both projectors.
    let mut recon = [DMatrix::<Complex64>::zeros(dim, dim), DMatrix::zeros(dim, dim)];
    for block in &pending {
        let mut proj = DMatrix::<Complex64>::zeros(dim, dim);
        for b in &block.basis {
            proj += b * b.adjoint();
        }
        recon[0] += &proj * q0 * &proj;
        recon[1] += &proj * q1 * &proj;
    }
    let reconstruction_error = [(q0 - &recon[0]).norm(), (q1 - &recon[1]).norm()];

    // Anchor each block at the state's projection and emit report rows.
    let mut blocks = Vec::new();
    for block in pending {
        match block.basis.len() {
            1 => {
                let v = &block.basis[0];
                let t = v.dotc(psi).norm_sqr();
                blocks.push(JordanBlock {
                    dim: 1,
                    t,
                    alpha: wrap_half_pi(block.phi0),
                    beta: wrap_half_pi(block.phi1),
                    basis: vec![vector_to_wire(v)],
                });
            }
            _ => {
                let e1 = &block.basis[0];
                let e2 = &block.basis[1];
                let a = e1.dotc(psi);
                let b = e2.dotc(psi);
                let t = a.norm_sqr() + b.norm_sqr();
                let coherence = (a.conj() * b).im.abs();
                if t <= ZERO_WEIGHT {
                    blocks.push(anchored_block(e1, e2, &block, 0.0, 0.0));
                } else if coherence <= COHERENCE_TOL * t.max(1e-6) {
                    // The component is real after a global phase: anchor at it.
                    let phase = if a.norm() >= b.norm() { a.arg() } else { b.arg() };
                    let rot = Complex64::from_polar(1.0, -phase);
                    let x = (a * rot).re;
                    let y = (b * rot).re;
                    blocks.push(anchored_block(e1, e2, &block, y.atan2(x), t));
                } else {
                    // Phase-incoherent: split into the two real sub-planes.
                    let (xa, ya) = (a.re, b.re);
                    let (xb, yb) = (a.im, b.im);
                    let ta = xa * xa + ya * ya;
                    let tb = xb * xb + yb * yb;
                    let i = Complex64::new(0.0, 1.0);
                    let e1i = e1 * i;
                    let e2i = e2 * i;
                    blocks.push(anchored_block(e1, e2, &block, ya.atan2(xa), ta));
                    blocks.push(anchored_block(&e1i, &e2i, &block, yb.atan2(xb), tb));
                }
            }
        }
    }

    let p0: f64 = blocks.iter().map(|b| b.t * b.alpha.cos().powi(2)).sum();
    let p1: f64 = blocks.iter().map(|b| b.t * b.beta.cos().powi(2)).sum();
    let p_xor: f64 = blocks
        .iter()
        .map(|b| b.t * b.relative_angle().cos().powi(2))
        .sum();
    let delta = (p_xor - 0.5).abs();
    let quantum_slack = COS_SQ_PI_8 + delta - (p0 + p1) / 2.0;
    let classical_diag = blocks.iter().all(|b| b.dim == 1);

    let report = JordanReport {
        blocks,
        p0,
        p1,
        p_xor,
        delta,
        quantum_slack,
        classical_diag,
        reconstruction_error,
    };

    // The identities are part of the contract; fail loudly if numerics drift.
    let p0_dense = (q0 * psi).norm_squared();
    let p1_dense = (q1 * psi).norm_squared();
    let pxor_dense = parity_success(q0, q1, psi)?;
    for (got, want, name) in [
        (report.p0, p0_dense, "p0"),
        (report.p1, p1_dense, "p1"),
        (report.p_xor, pxor_dense, "p_xor"),
    ] {
        if (got - want).abs() > JORDAN_TOL {
            return Err(Error::Validation(format!(
                "{name} drifted from dense evaluation: {got} vs {want}"
            )));
        }
    }
    Ok(report)
}

/// Builds the report row for a 2-dim block anchored at state angle theta_u,
/// normalizing the basis reflection so that alpha >= beta.
fn anchored_block(
    e1: &DVector<Complex64>,
    e2: &DVector<Complex64>,
    block: &PendingBlock,
    theta_u: f64,
    t: f64,
) -> JordanBlock {
    let mut alpha = wrap_half_pi(block.phi0 - theta_u);
    let mut beta = wrap_half_pi(block.phi1 - theta_u);
    let (c, s) = (theta_u.cos(), theta_u.sin());
    let u = e1 * Complex64::new(c, 0.0) + e2 * Complex64::new(s, 0.0);
    let mut u_perp = e1 * Complex64::new(-s, 0.0) + e2 * Complex64::new(c, 0.0);
    if alpha < beta {
        alpha = wrap_half_pi(-alpha);
        beta = wrap_half_pi(-beta);
        u_perp = -u_perp;
    }
    JordanBlock {
        dim: 2,
        t,
        alpha,
        beta,
        basis: vec![vector_to_wire(&u), vector_to_wire(&u_perp)],
    }
}

/// Probability that measuring {Q0, Id-Q0} then {Q1, Id-Q1} lands twice on
/// the same side: || (Q1 Q0 + (Id-Q1)(Id-Q0)) psi ||^2.
pub fn parity_success(
    q0: &DMatrix<Complex64>,
    q1: &DMatrix<Complex64>,
    psi: &DVector<Complex64>,
) -> Result<f64> {
    validate_inputs(q0, q1, psi)?;
    let dim = psi.len();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let op = q1 * q0 + (&id - q1) * (&id - q0);
    Ok((op * psi).norm_squared())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::provers::device::{line_projector, random_projector, random_state, Device};
    use crate::rng::experiment_rng;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn diag01() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)])
    }

    #[test]
    fn commuting_diagonal_projectors_split_into_unit_blocks() {
        let q = diag01();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = DVector::from_vec(vec![c(s), c(s)]);
        let report = jordan_decompose(&q, &q, &psi).unwrap();
        assert_eq!(report.blocks.len(), 2);
        assert!(report.classical_diag);
        let mut pairs: Vec<(f64, f64, f64)> = report
            .blocks
            .iter()
            .map(|b| (b.alpha, b.beta, b.t))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // The kernel direction folds pi/2 to -pi/2 (angles live mod pi).
        assert_abs_diff_eq!(pairs[0].0, -FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(pairs[0].1, -FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(pairs[0].2, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(pairs[1].0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pairs[1].1, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pairs[1].2, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(report.p_xor, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tilted_pair_forms_one_two_dim_block() {
        let q0 = diag01();
        let q1 = line_projector(FRAC_PI_8);
        let psi = DVector::from_vec(vec![c(0.6), c(0.8)]);
        let report = jordan_decompose(&q0, &q1, &psi).unwrap();
        let occupied: Vec<_> = report.blocks.iter().filter(|b| b.t > 1e-9).collect();
        assert_eq!(occupied.len(), 1);
        assert_eq!(occupied[0].dim, 2);
        assert_abs_diff_eq!(
            occupied[0].relative_angle().abs(),
            FRAC_PI_8,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(report.p_xor, FRAC_PI_8.cos().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn canonical_device_recovers_pi_8_angles() {
        let device = Device::canonical_optimal();
        let report = jordan_decompose(
            device.projector(0),
            device.projector(1),
            device.state(),
        )
        .unwrap();
        let main = report
            .blocks
            .iter()
            .find(|b| b.t > 0.5)
            .expect("state occupies one block");
        assert_abs_diff_eq!(main.alpha, FRAC_PI_8, epsilon = 1e-12);
        assert_abs_diff_eq!(main.beta, -FRAC_PI_8, epsilon = 1e-12);
        assert_abs_diff_eq!(report.p0, COS_SQ_PI_8, epsilon = 1e-12);
        assert_abs_diff_eq!(report.p1, COS_SQ_PI_8, epsilon = 1e-12);
        assert_abs_diff_eq!(report.p_xor, 0.5, epsilon = 1e-12);
        assert!(report.quantum_slack.abs() <= 1e-12);
    }

    #[test]
    fn parity_success_limit_cases() {
        let mut rng = experiment_rng(51, 0);
        for dim in [2usize, 5] {
            let q0 = random_projector(dim, dim / 2 + 1, true, &mut rng);
            let psi = random_state(dim, true, &mut rng);
            assert_abs_diff_eq!(parity_success(&q0, &q0, &psi).unwrap(), 1.0, epsilon = 1e-10);
            let comp = DMatrix::<Complex64>::identity(dim, dim) - &q0;
            assert_abs_diff_eq!(parity_success(&q0, &comp, &psi).unwrap(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn canonical_block_parity_is_half() {
        let device = Device::canonical_optimal();
        let p = parity_success(device.projector(0), device.projector(1), device.state()).unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
    }

    /// Identity audit over random devices, real and complex entries.
    #[test]
    fn random_devices_satisfy_all_identities() {
        for (seed, complex) in [(60u64, false), (61, true), (62, true)] {
            let mut rng = experiment_rng(seed, 0);
            for trial in 0..25 {
                let dim = 2 + (trial % 15);
                let device = Device::random(dim, complex, &mut rng).unwrap();
                let (q0, q1, psi) = (device.projector(0), device.projector(1), device.state());
                let report = jordan_decompose(q0, q1, psi).unwrap();

                assert!(report.blocks.iter().all(|b| b.dim <= 2));
                let total_t: f64 = report.blocks.iter().map(|b| b.t).sum();
                assert_abs_diff_eq!(total_t, 1.0, epsilon = 1e-9);
                assert!(report.reconstruction_error[0] <= 1e-9);
                assert!(report.reconstruction_error[1] <= 1e-9);

                assert_abs_diff_eq!(report.p0, (q0 * psi).norm_squared(), epsilon = 1e-9);
                assert_abs_diff_eq!(report.p1, (q1 * psi).norm_squared(), epsilon = 1e-9);
                assert_abs_diff_eq!(
                    report.p_xor,
                    parity_success(q0, q1, psi).unwrap(),
                    epsilon = 1e-9
                );
            }
        }
    }

    /// The per-block 2x2 representations match the stated forms.
    #[test]
    fn block_bases_reproduce_the_canonical_forms() {
        let mut rng = experiment_rng(63, 0);
        let device = Device::random(8, true, &mut rng).unwrap();
        let (q0, q1, psi) = (device.projector(0), device.projector(1), device.state());
        let report = jordan_decompose(q0, q1, psi).unwrap();
        for block in report.blocks.iter().filter(|b| b.dim == 2) {
            let to_vec = |w: &Vec<[f64; 2]>| {
                DVector::from_iterator(w.len(), w.iter().map(|[re, im]| Complex64::new(*re, *im)))
            };
            let u = to_vec(&block.basis[0]);
            let up = to_vec(&block.basis[1]);
            for (q, angle) in [(q0, block.alpha), (q1, block.beta)] {
                let (cs, sn) = (angle.cos(), angle.sin());
                assert_abs_diff_eq!(u.dotc(&(q * &u)).re, cs * cs, epsilon = 1e-9);
                assert_abs_diff_eq!(up.dotc(&(q * &up)).re, sn * sn, epsilon = 1e-9);
                assert_abs_diff_eq!(u.dotc(&(q * &up)).re, cs * sn, epsilon = 1e-9);
                assert_abs_diff_eq!(u.dotc(&(q * &up)).im, 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let q = diag01();
        let long = DVector::from_vec(vec![c(1.0), c(0.0), c(0.0)]);
        assert!(jordan_decompose(&q, &q, &long).is_err());
        let unnorm = DVector::from_vec(vec![c(0.9), c(0.0)]);
        assert!(matches!(
            jordan_decompose(&q, &q, &unnorm),
            Err(Error::Normalization(_))
        ));
        let not_proj = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.5)]);
        let psi = DVector::from_vec(vec![c(1.0), c(0.0)]);
        assert!(jordan_decompose(&not_proj, &q, &psi).is_err());
    }
}
