//! Quantum state simulation, sized for the honest prover and the extraction
//! circuits.
//!
//! Three layers:
//! * [`sparse`] — label-indexed amplitudes for claw superpositions. The
//!   honest pipeline never holds more than two nonzero amplitudes, and the
//!   Hadamard collapse samples its outcome without materializing 2^n terms.
//! * [`dense`] — a small register-level statevector (<= 13 qubits) for the
//!   coherent extraction circuits.
//! * [`projective`] — matrix-level projective measurement for device provers.

pub mod dense;
pub mod projective;
pub mod qubit;
pub mod sparse;

pub use dense::DenseState;
pub use projective::{measure_projective, validate_projector};
pub use qubit::{measure_rotated, QubitState};
pub use sparse::{append_inner_products, hadamard_collapse, measure_basis, superpose_claw, SparseState};

/// Squared-norm drift tolerated before a state is declared malformed.
pub const NORM_TOL: f64 = 1e-12;
/// Amplitudes below this magnitude are pruned.
pub const AMP_PRUNE: f64 = 1e-14;
/// Tolerance for projector validation (hermiticity and idempotence).
pub const PROJECTOR_TOL: f64 = 1e-10;
