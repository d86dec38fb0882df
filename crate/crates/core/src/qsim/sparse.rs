//! Sparse statevector over labeled registers.
//!
//! Basis labels are tuples of bit strings matching a declared register
//! layout. The honest prover only ever needs two nonzero amplitudes; the
//! Hadamard collapse therefore samples the outcome string directly instead
//! of expanding 2^n amplitudes.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::tcf::Claw;

use super::qubit::QubitState;
use super::{AMP_PRUNE, NORM_TOL};

pub type Label = Vec<Bits>;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    layout: Vec<(String, usize)>,
    amps: BTreeMap<Label, Complex64>,
}

impl SparseState {
    pub fn new(layout: Vec<(String, usize)>, amps: BTreeMap<Label, Complex64>) -> Result<Self> {
        let mut state = SparseState { layout, amps };
        state.prune();
        state.validate()?;
        Ok(state)
    }

    fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= AMP_PRUNE);
    }

    fn validate(&self) -> Result<()> {
        for label in self.amps.keys() {
            if label.len() != self.layout.len() {
                return Err(Error::Validation(format!(
                    "label has {} registers, layout has {}",
                    label.len(),
                    self.layout.len()
                )));
            }
            for (part, (name, width)) in label.iter().zip(&self.layout) {
                if part.n_bits() != *width {
                    return Err(Error::Validation(format!(
                        "register {name} expects {width} bits, label part has {}",
                        part.n_bits()
                    )));
                }
            }
        }
        let norm_sq = self.norm_sq();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(norm_sq));
        }
        Ok(())
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn layout(&self) -> &[(String, usize)] {
        &self.layout
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&Label, &Complex64)> {
        self.amps.iter()
    }

    pub fn term_count(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, label: &Label) -> Complex64 {
        self.amps
            .get(label)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// (|x0> + |x1>)/sqrt(2) over a single register named "x".
pub fn superpose_claw(claw: &Claw) -> Result<SparseState> {
    if claw.x0 == claw.x1 {
        return Err(Error::Validation("claw elements coincide".into()));
    }
    if claw.x0.n_bits() != claw.x1.n_bits() {
        return Err(Error::Validation("claw elements differ in width".into()));
    }
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = BTreeMap::new();
    amps.insert(vec![claw.x0.clone()], amp);
    amps.insert(vec![claw.x1.clone()], amp);
    SparseState::new(vec![("x".into(), claw.x0.n_bits())], amps)
}

/// Extends each branch x with the bit r_b . x, where b is the branch's
/// preimage type. The differentiating ancilla is computed and uncomputed
/// inside this step, so the output registers are just ("x", n), ("w", 1).
pub fn append_inner_products(
    state: &SparseState,
    r0: &Bits,
    r1: &Bits,
    type_fn: impl Fn(&Bits) -> Result<u8>,
) -> Result<SparseState> {
    let n = match state.layout() {
        [(name, n)] if name == "x" => *n,
        other => {
            return Err(Error::Validation(format!(
                "expected a bare claw register, found layout {other:?}"
            )))
        }
    };
    if r0.n_bits() != n || r1.n_bits() != n {
        return Err(Error::Validation("r widths do not match the claw register".into()));
    }
    let mut amps = BTreeMap::new();
    let mut seen_types = [false; 2];
    for (label, &amp) in state.amplitudes() {
        let x = &label[0];
        let t = type_fn(x)?;
        if t > 1 {
            return Err(Error::Validation(format!(
                "type oracle returned {t}, not a bit"
            )));
        }
        seen_types[t as usize] = true;
        let r = if t == 0 { r0 } else { r1 };
        let w = Bits::from_u64(u64::from(r.dot(x)), 1)?;
        amps.insert(vec![x.clone(), w], amp);
    }
    if state.term_count() == 2 && !(seen_types[0] && seen_types[1]) {
        return Err(Error::Validation(
            "type oracle does not split the claw branches".into(),
        ));
    }
    SparseState::new(
        vec![("x".into(), n), ("w".into(), 1)],
        amps,
    )
}

/// Hadamard transform on the x register followed by its measurement.
///
/// For a two-branch state the outcome d is uniform over {0,1}^n and only the
/// relative phase (-1)^(d.(x0+x1)) survives, so d is sampled directly. The
/// residual qubit is (|w0> + (-1)^(d.(x0+x1)) |w1>)/sqrt(2) when the branch
/// bits differ, and |w0> exactly when they agree; the global phase
/// (-1)^(d.x0) is dropped.
pub fn hadamard_collapse<R: Rng + ?Sized>(
    state: &SparseState,
    rng: &mut R,
) -> Result<(Bits, QubitState)> {
    let n = match state.layout() {
        [(xn, n), (wn, 1)] if xn == "x" && wn == "w" => *n,
        other => {
            return Err(Error::Validation(format!(
                "expected registers (x, w), found layout {other:?}"
            )))
        }
    };
    let branches: Vec<(&Label, &Complex64)> = state.amplitudes().collect();
    if branches.len() != 2 {
        return Err(Error::Validation(format!(
            "expected a two-branch state, found {} terms",
            branches.len()
        )));
    }
    let (l0, a0) = branches[0];
    let (l1, a1) = branches[1];
    let (x0, w0) = (&l0[0], l0[1].bit(0));
    let (x1, w1) = (&l1[0], l1[1].bit(0));
    if x0 == x1 {
        return Err(Error::Validation("branches share the claw label".into()));
    }

    let d = Bits::uniform(n, rng);
    if w0 == w1 {
        return Ok((d, QubitState::basis(w0)));
    }
    let phase = if d.dot(&x0.xor(x1)) == 1 { -1.0 } else { 1.0 };
    let mut coeffs = [Complex64::new(0.0, 0.0); 2];
    coeffs[w0 as usize] = *a0;
    coeffs[w1 as usize] = *a1 * phase;
    let norm = (coeffs[0].norm_sqr() + coeffs[1].norm_sqr()).sqrt();
    QubitState::new(coeffs[0] / norm, coeffs[1] / norm).map(|q| (d, q))
}

/// Samples a full computational-basis measurement.
pub fn measure_basis<R: Rng + ?Sized>(state: &SparseState, rng: &mut R) -> Result<Label> {
    let norm_sq = state.norm_sq();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization(norm_sq));
    }
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = None;
    for (label, amp) in state.amplitudes() {
        acc += amp.norm_sqr();
        last = Some(label);
        if u < acc {
            return Ok(label.clone());
        }
    }
    // Rounding can leave u marginally above the accumulated mass.
    last.cloned()
        .ok_or_else(|| Error::Validation("empty state".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::experiment_rng;
    use crate::tcf::{self, TcfFamily};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bits(v: u64, n: usize) -> Bits {
        Bits::from_u64(v, n).unwrap()
    }

    fn sample_claw(n: u32, seed: u64) -> (tcf::TcfKey, Claw) {
        let mut rng = experiment_rng(seed, 0);
        let (key, td) = tcf::gen(n, TcfFamily::Toy, &mut rng).unwrap();
        let y = bits(1, n as usize);
        let claw = tcf::invert(&td, &key, &y).unwrap();
        (key, claw)
    }

    #[test]
    fn claw_superposition_has_equal_amplitudes() {
        let claw = Claw {
            x0: bits(2, 5),
            x1: bits(5, 5),
            y: bits(4, 5),
        };
        let state = superpose_claw(&claw).unwrap();
        assert_eq!(state.term_count(), 2);
        for (_, amp) in state.amplitudes() {
            assert_abs_diff_eq!(amp.re, FRAC_1_SQRT_2, epsilon = 1e-15);
            assert_abs_diff_eq!(amp.im, 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(state.norm_sq(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_claw_is_rejected() {
        let claw = Claw {
            x0: bits(3, 4),
            x1: bits(3, 4),
            y: bits(1, 4),
        };
        assert!(matches!(superpose_claw(&claw), Err(Error::Validation(_))));
    }

    #[test]
    fn basis_measurement_splits_evenly() {
        let claw = Claw {
            x0: bits(2, 5),
            x1: bits(5, 5),
            y: bits(4, 5),
        };
        let state = superpose_claw(&claw).unwrap();
        let mut rng = experiment_rng(7, 0);
        let trials = 10_000;
        let mut hits = 0;
        for _ in 0..trials {
            let label = measure_basis(&state, &mut rng).unwrap();
            assert!(label[0] == claw.x0 || label[0] == claw.x1);
            if label[0] == claw.x0 {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "frequency {freq}");
    }

    #[test]
    fn inner_product_bits_follow_types() {
        let (key, claw) = sample_claw(4, 11);
        let n = key.domain_bits();
        let state = superpose_claw(&claw).unwrap();
        // Pick r0, r1 with r0.x0 = 0 and r1.x1 = 1.
        let mut rng = experiment_rng(12, 0);
        let (r0, r1) = loop {
            let r0 = Bits::uniform(n, &mut rng);
            let r1 = Bits::uniform(n, &mut rng);
            if r0.dot(&claw.x0) == 0 && r1.dot(&claw.x1) == 1 {
                break (r0, r1);
            }
        };
        let ext = append_inner_products(&state, &r0, &r1, |x| tcf::preimage_type(&key, x)).unwrap();
        assert_abs_diff_eq!(ext.norm_sq(), 1.0, epsilon = 1e-14);
        let a0 = ext.amplitude(&vec![claw.x0.clone(), bits(0, 1)]);
        let a1 = ext.amplitude(&vec![claw.x1.clone(), bits(1, 1)]);
        assert_abs_diff_eq!(a0.re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(a1.re, FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn zero_r_strings_give_zero_bits() {
        let (key, claw) = sample_claw(4, 13);
        let n = key.domain_bits();
        let state = superpose_claw(&claw).unwrap();
        let z = Bits::zeros(n);
        let ext = append_inner_products(&state, &z, &z, |x| tcf::preimage_type(&key, x)).unwrap();
        for (label, _) in ext.amplitudes() {
            assert_eq!(label[1].bit(0), 0);
        }
    }

    #[test]
    fn bad_type_oracle_is_an_error() {
        let (_, claw) = sample_claw(4, 14);
        let state = superpose_claw(&claw).unwrap();
        let z = Bits::zeros(4);
        assert!(matches!(
            append_inner_products(&state, &z, &z, |_| Ok(2)),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            append_inner_products(&state, &z, &z, |_| Ok(0)),
            Err(Error::Validation(_))
        ));
    }

    fn two_branch(claw: &Claw, w0: u8, w1: u8) -> SparseState {
        let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let mut amps = BTreeMap::new();
        amps.insert(vec![claw.x0.clone(), bits(w0 as u64, 1)], amp);
        amps.insert(vec![claw.x1.clone(), bits(w1 as u64, 1)], amp);
        SparseState::new(
            vec![("x".into(), claw.x0.n_bits()), ("w".into(), 1)],
            amps,
        )
        .unwrap()
    }

    #[test]
    fn collapse_phase_tracks_d_parity() {
        let claw = Claw {
            x0: bits(2, 3),
            x1: bits(5, 3),
            y: bits(1, 3),
        };
        let state = two_branch(&claw, 0, 1);
        let delta = claw.xor();
        let mut rng = experiment_rng(21, 0);
        let mut seen = [false; 2];
        for _ in 0..64 {
            let (d, q) = hadamard_collapse(&state, &mut rng).unwrap();
            let beta = d.dot(&delta);
            seen[beta as usize] = true;
            let expect_a1 = if beta == 1 { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
            assert_abs_diff_eq!(q.a0.re, FRAC_1_SQRT_2, epsilon = 1e-15);
            assert_abs_diff_eq!(q.a1.re, expect_a1, epsilon = 1e-15);
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn collapse_with_equal_bits_is_deterministic() {
        let claw = Claw {
            x0: bits(2, 3),
            x1: bits(5, 3),
            y: bits(1, 3),
        };
        let state = two_branch(&claw, 0, 0);
        let mut rng = experiment_rng(22, 0);
        for _ in 0..32 {
            let (_, q) = hadamard_collapse(&state, &mut rng).unwrap();
            assert_eq!(q, QubitState::basis(0));
        }
        let state = two_branch(&claw, 1, 1);
        for _ in 0..32 {
            let (_, q) = hadamard_collapse(&state, &mut rng).unwrap();
            assert_eq!(q, QubitState::basis(1));
        }
    }

    #[test]
    fn collapse_outcomes_are_uniform() {
        // Chi-squared uniformity at significance 0.001 for n = 3
        // (df = 7, critical value 24.3219).
        let claw = Claw {
            x0: bits(2, 3),
            x1: bits(5, 3),
            y: bits(1, 3),
        };
        let state = two_branch(&claw, 0, 1);
        let mut rng = experiment_rng(23, 0);
        let trials = 10_000usize;
        let mut counts = [0usize; 8];
        for _ in 0..trials {
            let (d, _) = hadamard_collapse(&state, &mut rng).unwrap();
            counts[d.to_u64() as usize] += 1;
        }
        let expected = trials as f64 / 8.0;
        let chi_sq: f64 = counts
            .iter()
            .map(|&c| {
                let diff = c as f64 - expected;
                diff * diff / expected
            })
            .sum();
        assert!(chi_sq < 24.3219, "chi-squared statistic {chi_sq}");
    }

    #[test]
    fn malformed_states_are_rejected() {
        let claw = Claw {
            x0: bits(2, 3),
            x1: bits(5, 3),
            y: bits(1, 3),
        };
        let plain = superpose_claw(&claw).unwrap();
        let mut rng = experiment_rng(24, 0);
        assert!(hadamard_collapse(&plain, &mut rng).is_err());

        let mut amps = BTreeMap::new();
        amps.insert(vec![bits(0, 3), bits(0, 1)], Complex64::new(1.0, 0.0));
        let one_term = SparseState::new(vec![("x".into(), 3), ("w".into(), 1)], amps).unwrap();
        assert!(hadamard_collapse(&one_term, &mut rng).is_err());
    }

    #[test]
    fn norm_violations_are_caught_at_construction() {
        let mut amps = BTreeMap::new();
        amps.insert(vec![bits(0, 2)], Complex64::new(0.9, 0.0));
        assert!(matches!(
            SparseState::new(vec![("x".into(), 2)], amps),
            Err(Error::Normalization(_))
        ));
    }
}
