//! Dense statevector for the coherent extraction circuits.
//!
//! Qubit i is bit i of the basis index (little-endian, matching [`crate::bits::Bits`]).
//! The register budget is 13 qubits: 12 for the adversary plus one
//! phase-kickback ancilla.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

use super::NORM_TOL;

pub const MAX_QUBITS: usize = 13;

#[derive(Debug, Clone)]
pub struct DenseState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{n_qubits} qubits exceed the {MAX_QUBITS}-qubit budget"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n_qubits, amps })
    }

    /// Tensor product of blocks, first block on the low qubits. Each block is
    /// (width, amplitudes of length 2^width).
    pub fn product(blocks: &[(usize, Vec<Complex64>)]) -> Result<Self> {
        let n: usize = blocks.iter().map(|(w, _)| w).sum();
        let mut state = DenseState::zero(n)?;
        state.amps[0] = Complex64::new(0.0, 0.0);
        let mut full = vec![Complex64::new(1.0, 0.0)];
        for (width, amps) in blocks {
            if amps.len() != 1 << width {
                return Err(Error::Validation(format!(
                    "block of width {width} needs {} amplitudes, got {}",
                    1 << width,
                    amps.len()
                )));
            }
            let mut next = Vec::with_capacity(full.len() << width);
            for hi in amps {
                for lo in &full {
                    next.push(lo * hi);
                }
            }
            full = next;
        }
        state.amps = full;
        let norm_sq = state.norm_sq();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(norm_sq));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_1q(&mut self, q: usize, m: &[[Complex64; 2]; 2]) {
        assert!(q < self.n_qubits);
        let mask = 1usize << q;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a, b) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[j] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn h(&mut self, q: usize) {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_1q(q, &[[s, s], [s, -s]]);
    }

    pub fn x(&mut self, q: usize) {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        self.apply_1q(q, &[[z, o], [o, z]]);
    }

    pub fn z(&mut self, q: usize) {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        self.apply_1q(q, &[[o, z], [z, -o]]);
    }

    pub fn cx(&mut self, control: usize, target: usize) {
        assert!(control != target);
        let cm = 1usize << control;
        let tm = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
    }

    pub fn ccx(&mut self, c1: usize, c2: usize, target: usize) {
        assert!(c1 != c2 && c1 != target && c2 != target);
        let m1 = 1usize << c1;
        let m2 = 1usize << c2;
        let tm = 1usize << target;
        for i in 0..self.amps.len() {
            if i & m1 != 0 && i & m2 != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
    }

    /// Marginal probability distribution of a contiguous register.
    pub fn register_distribution(&self, lo: usize, width: usize) -> Vec<f64> {
        assert!(lo + width <= self.n_qubits);
        let mut probs = vec![0.0; 1 << width];
        let mask = (1usize << width) - 1;
        for (i, amp) in self.amps.iter().enumerate() {
            probs[(i >> lo) & mask] += amp.norm_sqr();
        }
        probs
    }

    /// Measures a contiguous register, collapsing the state.
    pub fn measure_register<R: Rng + ?Sized>(
        &mut self,
        lo: usize,
        width: usize,
        rng: &mut R,
    ) -> u64 {
        let probs = self.register_distribution(lo, width);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut outcome = probs.len() - 1;
        for (v, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                outcome = v;
                break;
            }
        }
        let mask = (1usize << width) - 1;
        let mut norm_sq = 0.0;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i >> lo) & mask != outcome {
                *amp = Complex64::new(0.0, 0.0);
            } else {
                norm_sq += amp.norm_sqr();
            }
        }
        let scale = norm_sq.sqrt().recip();
        for amp in &mut self.amps {
            *amp *= scale;
        }
        outcome as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::experiment_rng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hadamard_pair_restores_basis() {
        let mut s = DenseState::zero(2).unwrap();
        s.h(0);
        s.h(0);
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn cx_entangles_and_measurement_correlates() {
        let mut s = DenseState::zero(2).unwrap();
        s.h(0);
        s.cx(0, 1);
        let probs = s.register_distribution(0, 2);
        assert_abs_diff_eq!(probs[0b00], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(probs[0b11], 0.5, epsilon = 1e-15);
        let mut rng = experiment_rng(1, 0);
        for _ in 0..32 {
            let mut t = s.clone();
            let a = t.measure_register(0, 1, &mut rng);
            let b = t.measure_register(1, 1, &mut rng);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn product_assembles_blocks_little_endian() {
        let one = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let zero = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let s = DenseState::product(&[(1, one), (1, zero)]).unwrap();
        // Low qubit |1>, high qubit |0> -> index 0b01.
        assert_abs_diff_eq!(s.amplitudes()[0b01].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(
            DenseState::zero(MAX_QUBITS + 1),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn ccx_flips_only_when_both_controls_set() {
        let mut s = DenseState::zero(3).unwrap();
        s.x(0);
        s.ccx(0, 1, 2);
        assert_abs_diff_eq!(s.amplitudes()[0b001].re, 1.0, epsilon = 1e-15);
        s.x(1);
        s.ccx(0, 1, 2);
        assert_abs_diff_eq!(s.amplitudes()[0b111].re, 1.0, epsilon = 1e-15);
    }
}
