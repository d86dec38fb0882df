//! Reversible circuits over named registers.
//!
//! Adversary unitaries are supplied as explicit gate lists so that they can
//! be executed coherently and inverted; sampled-only adversaries have no
//! place here. The gate set is {H, X, Z, CX, CCX, arbitrary 1-qubit unitary
//! by matrix}, JSON-encoded.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::DenseState;

pub type QubitRef = (String, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Gate {
    H { q: QubitRef },
    X { q: QubitRef },
    Z { q: QubitRef },
    Cx { c: QubitRef, t: QubitRef },
    Ccx { c1: QubitRef, c2: QubitRef, t: QubitRef },
    /// Arbitrary single-qubit unitary, row-major [[re, im]; 2]; 2].
    U1 { q: QubitRef, matrix: [[[f64; 2]; 2]; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegisterDef {
    pub name: String,
    pub width: usize,
}

/// A gate list bound to a register layout. Registers occupy consecutive
/// qubits in declaration order, least significant first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateList {
    pub registers: Vec<RegisterDef>,
    pub gates: Vec<Gate>,
}

fn to_c(m: &[[f64; 2]; 2]) -> [Complex64; 2] {
    [
        Complex64::new(m[0][0], m[0][1]),
        Complex64::new(m[1][0], m[1][1]),
    ]
}

fn matrix_c(m: &[[[f64; 2]; 2]; 2]) -> [[Complex64; 2]; 2] {
    [to_c(&m[0]), to_c(&m[1])]
}

fn adjoint_c(m: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

fn is_unitary(m: &[[Complex64; 2]; 2]) -> bool {
    let a = adjoint_c(m);
    // rows of a * m
    let mut err: f64 = 0.0;
    for (i, a_row) in a.iter().enumerate() {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, row) in m.iter().enumerate() {
                acc += a_row[k] * row[j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            err = err.max((acc - target).norm());
        }
    }
    err <= 1e-10
}

impl GateList {
    pub fn total_width(&self) -> usize {
        self.registers.iter().map(|r| r.width).sum()
    }

    pub fn register_offset(&self, name: &str) -> Result<(usize, usize)> {
        let mut offset = 0;
        for reg in &self.registers {
            if reg.name == name {
                return Ok((offset, reg.width));
            }
            offset += reg.width;
        }
        Err(Error::Validation(format!("unknown register {name:?}")))
    }

    fn resolve(&self, q: &QubitRef) -> Result<usize> {
        let (offset, width) = self.register_offset(&q.0)?;
        if q.1 >= width {
            return Err(Error::Validation(format!(
                "qubit {} out of range for register {:?} of width {width}",
                q.1, q.0
            )));
        }
        Ok(offset + q.1)
    }

    /// Structural validation: register bounds and unitarity of matrix gates.
    pub fn validate(&self) -> Result<()> {
        for gate in &self.gates {
            match gate {
                Gate::H { q } | Gate::X { q } | Gate::Z { q } => {
                    self.resolve(q)?;
                }
                Gate::Cx { c, t } => {
                    let (c, t) = (self.resolve(c)?, self.resolve(t)?);
                    if c == t {
                        return Err(Error::Validation("cx control equals target".into()));
                    }
                }
                Gate::Ccx { c1, c2, t } => {
                    let (a, b, t) = (self.resolve(c1)?, self.resolve(c2)?, self.resolve(t)?);
                    if a == b || a == t || b == t {
                        return Err(Error::Validation("ccx qubits must be distinct".into()));
                    }
                }
                Gate::U1 { q, matrix } => {
                    self.resolve(q)?;
                    if !is_unitary(&matrix_c(matrix)) {
                        return Err(Error::Validation(
                            "u1 gate matrix is not unitary".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn apply_gate(&self, state: &mut DenseState, gate: &Gate, inverse: bool) -> Result<()> {
        match gate {
            Gate::H { q } => state.h(self.resolve(q)?),
            Gate::X { q } => state.x(self.resolve(q)?),
            Gate::Z { q } => state.z(self.resolve(q)?),
            Gate::Cx { c, t } => state.cx(self.resolve(c)?, self.resolve(t)?),
            Gate::Ccx { c1, c2, t } => {
                state.ccx(self.resolve(c1)?, self.resolve(c2)?, self.resolve(t)?)
            }
            Gate::U1 { q, matrix } => {
                let m = matrix_c(matrix);
                let m = if inverse { adjoint_c(&m) } else { m };
                state.apply_1q(self.resolve(q)?, &m);
            }
        }
        Ok(())
    }

    /// Applies the circuit to the low `total_width()` qubits of `state`.
    pub fn apply(&self, state: &mut DenseState) -> Result<()> {
        if state.n_qubits() < self.total_width() {
            return Err(Error::Capacity("state narrower than the circuit".into()));
        }
        for gate in &self.gates {
            self.apply_gate(state, gate, false)?;
        }
        Ok(())
    }

    /// Applies the inverse circuit (gates reversed, matrices conjugated).
    pub fn apply_inverse(&self, state: &mut DenseState) -> Result<()> {
        if state.n_qubits() < self.total_width() {
            return Err(Error::Capacity("state narrower than the circuit".into()));
        }
        for gate in self.gates.iter().rev() {
            self.apply_gate(state, gate, true)?;
        }
        Ok(())
    }
}

/// Rotation by phi in the real plane, cos(phi)|0> - sin(phi)|1> column form.
pub fn rotation_matrix(phi: f64) -> [[[f64; 2]; 2]; 2] {
    let (c, s) = (phi.cos(), phi.sin());
    [[[c, 0.0], [-s, 0.0]], [[s, 0.0], [c, 0.0]]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reg(name: &str, width: usize) -> RegisterDef {
        RegisterDef {
            name: name.into(),
            width,
        }
    }

    #[test]
    fn apply_then_inverse_is_identity() {
        let list = GateList {
            registers: vec![reg("x", 2), reg("out", 1)],
            gates: vec![
                Gate::H {
                    q: ("x".into(), 0),
                },
                Gate::Cx {
                    c: ("x".into(), 0),
                    t: ("out".into(), 0),
                },
                Gate::U1 {
                    q: ("out".into(), 0),
                    matrix: rotation_matrix(0.3),
                },
                Gate::Ccx {
                    c1: ("x".into(), 0),
                    c2: ("x".into(), 1),
                    t: ("out".into(), 0),
                },
            ],
        };
        list.validate().unwrap();
        let mut state = DenseState::zero(3).unwrap();
        state.x(1);
        let reference = state.clone();
        list.apply(&mut state).unwrap();
        list.apply_inverse(&mut state).unwrap();
        for (a, b) in state.amplitudes().iter().zip(reference.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn validation_catches_bad_references_and_matrices() {
        let base = vec![reg("x", 2)];
        let bad_ref = GateList {
            registers: base.clone(),
            gates: vec![Gate::X {
                q: ("x".into(), 5),
            }],
        };
        assert!(bad_ref.validate().is_err());
        let bad_matrix = GateList {
            registers: base,
            gates: vec![Gate::U1 {
                q: ("x".into(), 0),
                matrix: [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]],
            }],
        };
        assert!(bad_matrix.validate().is_err());
    }

    #[test]
    fn json_round_trip_keeps_the_op_tags() {
        let list = GateList {
            registers: vec![reg("r", 1), reg("out", 1)],
            gates: vec![Gate::Cx {
                c: ("r".into(), 0),
                t: ("out".into(), 0),
            }],
        };
        let j = serde_json::to_value(&list).unwrap();
        assert_eq!(j["gates"][0]["op"], "cx");
        let back: GateList = serde_json::from_value(j).unwrap();
        assert_eq!(back, list);
    }
}
