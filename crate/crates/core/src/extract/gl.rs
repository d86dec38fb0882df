//! Inner-product queries and the one-shot extraction circuit.
//!
//! A predictor that outputs w with Pr(w = a.x) >= 1/2 + epsilon over uniform
//! x, while restoring the x register, surrenders the string a to a single
//! query/inverse-query pair: put x in uniform superposition, kick the output
//! bit's phase into a |-> ancilla, undo the query, and read a out of the
//! final Hadamard transform. The success probability is at least 4 eps^2.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::qsim::dense::{DenseState, MAX_QUBITS};

use super::gates::{rotation_matrix, Gate, GateList, RegisterDef};

/// A unitary parity predictor: registers ("x", n), ("aux", m), ("out", t);
/// the prediction is the last qubit of "out".
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InnerProductQuery {
    pub unitary: GateList,
    /// Initial auxiliary state, 2^m amplitudes as [re, im].
    pub aux_init: Vec<[f64; 2]>,
}

impl InnerProductQuery {
    pub fn widths(&self) -> Result<(usize, usize, usize)> {
        let (_, n) = self.unitary.register_offset("x")?;
        let (_, m) = self.unitary.register_offset("aux")?;
        let (_, t) = self.unitary.register_offset("out")?;
        Ok((n, m, t))
    }

    fn aux_amps(&self) -> Vec<Complex64> {
        self.aux_init
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect()
    }

    /// Builds |x> |psi> |y> over the query's registers.
    fn basis_input(&self, x: u64, y: u64) -> Result<DenseState> {
        let (n, m, t) = self.widths()?;
        let mut x_amp = vec![Complex64::new(0.0, 0.0); 1 << n];
        x_amp[x as usize] = Complex64::new(1.0, 0.0);
        let mut y_amp = vec![Complex64::new(0.0, 0.0); 1 << t];
        y_amp[y as usize] = Complex64::new(1.0, 0.0);
        DenseState::product(&[(n, x_amp), (m, self.aux_amps()), (t, y_amp)])
    }

    /// Validates layout, budget, unitarity and the x-restitution property:
    /// applying the query to a basis |x> must leave the x register exactly
    /// on x. Exhaustive for n <= 4, sampled otherwise.
    pub fn validate(&self) -> Result<()> {
        let (n, m, t) = self.widths()?;
        if self.unitary.registers.len() != 3
            || self.unitary.registers[0].name != "x"
            || self.unitary.registers[1].name != "aux"
            || self.unitary.registers[2].name != "out"
        {
            return Err(Error::Validation(
                "query registers must be exactly (x, aux, out)".into(),
            ));
        }
        if t == 0 {
            return Err(Error::Validation("query needs an output register".into()));
        }
        if n + m + t + 1 > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "query needs {} qubits plus the kickback ancilla, budget is {MAX_QUBITS}",
                n + m + t
            )));
        }
        if self.aux_init.len() != 1 << m {
            return Err(Error::Validation(format!(
                "aux state has {} amplitudes, register holds {}",
                self.aux_init.len(),
                1 << m
            )));
        }
        let aux_norm: f64 = self.aux_init.iter().map(|[re, im]| re * re + im * im).sum();
        if (aux_norm - 1.0).abs() > 1e-10 {
            return Err(Error::Normalization(aux_norm));
        }
        self.unitary.validate()?;

        let inputs: Vec<u64> = if n <= 4 {
            (0..1u64 << n).collect()
        } else {
            (0..16).map(|i| (i * 2654435761) % (1 << n)).collect()
        };
        for x in inputs {
            let mut state = self.basis_input(x, 0)?;
            self.unitary.apply(&mut state)?;
            let marginal = state.register_distribution(0, n);
            if (marginal[x as usize] - 1.0).abs() > 1e-9 {
                return Err(Error::Validation(format!(
                    "query disturbs the x register on input {x}"
                )));
            }
        }
        Ok(())
    }

    /// Empirical prediction rate against a claimed secret, for bias
    /// estimation.
    pub fn empirical_hits<R: Rng + ?Sized>(
        &self,
        secret: &Bits,
        trials: u64,
        rng: &mut R,
    ) -> Result<u64> {
        let (n, m, t) = self.widths()?;
        if secret.n_bits() != n {
            return Err(Error::Validation("secret width mismatch".into()));
        }
        let mut hits = 0;
        for _ in 0..trials {
            let x = rng.random_range(0..1u64 << n);
            let mut state = self.basis_input(x, 0)?;
            self.unitary.apply(&mut state)?;
            let w = state.measure_register(n + m + t - 1, 1, rng) as u8;
            let xb = Bits::from_u64(x, n)?;
            if w == secret.dot(&xb) {
                hits += 1;
            }
        }
        Ok(hits)
    }
}

#[derive(Debug, Clone)]
pub struct GlOutcome {
    pub candidate: Bits,
    /// Post-measurement state over (x, aux, out, kick); the x register has
    /// collapsed onto the candidate.
    pub state: DenseState,
}

/// One extraction round: one query and one inverse query around a phase
/// kickback, then a Hadamard readout of the x register.
///
/// Auxiliary cost beyond the query's own registers: exactly one ancilla
/// qubit, touched twice (prepared in |-> and hit by one CX).
pub fn gl_extract<R: Rng + ?Sized>(q: &InnerProductQuery, rng: &mut R) -> Result<GlOutcome> {
    q.validate()?;
    let (n, m, t) = q.widths()?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let uniform = vec![Complex64::new(s.powi(n as i32), 0.0); 1 << n];
    let zeros_t = {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << t];
        v[0] = Complex64::new(1.0, 0.0);
        v
    };
    let minus = vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)];
    let mut state = DenseState::product(&[(n, uniform), (m, q.aux_amps()), (t, zeros_t), (1, minus)])?;

    q.unitary.apply(&mut state)?;
    // Phase kickback from the prediction qubit into the |-> ancilla.
    state.cx(n + m + t - 1, n + m + t);
    q.unitary.apply_inverse(&mut state)?;
    for qubit in 0..n {
        state.h(qubit);
    }
    let candidate = state.measure_register(0, n, rng);
    Ok(GlOutcome {
        candidate: Bits::from_u64(candidate, n)?,
        state,
    })
}

/// Noise models for the built-in test predictors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PredictorNoise {
    /// Coherent rotation by phi with cos^2(phi) = 1/2 + epsilon. The
    /// measured bias is epsilon but the extraction circuit refocuses the
    /// rotation, so extraction succeeds with probability 1.
    Rotation { epsilon: f64 },
    /// XOR the prediction with x_0 AND x_1: bias exactly 1/4, extraction
    /// probability exactly 4 eps^2 = 1/4. Exercises the bound's tight case.
    AndDefect,
}

/// Builds the standard predictor w = a.x (+ noise) over registers
/// ("x", n), ("aux", 0), ("out", 1).
pub fn standard_predictor(secret: &Bits, noise: PredictorNoise) -> Result<InnerProductQuery> {
    let n = secret.n_bits();
    if n < 2 {
        return Err(Error::Validation("secret must have at least 2 bits".into()));
    }
    let mut gates = Vec::new();
    match noise {
        PredictorNoise::Rotation { epsilon } => {
            if !(0.0..=0.5).contains(&epsilon) {
                return Err(Error::Validation(format!(
                    "epsilon {epsilon} outside [0, 1/2]"
                )));
            }
            let phi = (0.5 + epsilon).sqrt().acos();
            gates.push(Gate::U1 {
                q: ("out".into(), 0),
                matrix: rotation_matrix(phi),
            });
        }
        PredictorNoise::AndDefect => {
            gates.push(Gate::Ccx {
                c1: ("x".into(), 0),
                c2: ("x".into(), 1),
                t: ("out".into(), 0),
            });
        }
    }
    for i in 0..n {
        if secret.bit(i) == 1 {
            gates.push(Gate::Cx {
                c: ("x".into(), i),
                t: ("out".into(), 0),
            });
        }
    }
    Ok(InnerProductQuery {
        unitary: GateList {
            registers: vec![
                RegisterDef {
                    name: "x".into(),
                    width: n,
                },
                RegisterDef {
                    name: "aux".into(),
                    width: 0,
                },
                RegisterDef {
                    name: "out".into(),
                    width: 1,
                },
            ],
            gates,
        },
        aux_init: vec![[1.0, 0.0]],
    })
}
