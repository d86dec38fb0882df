//! Coherent extraction of secrets from parity predictors: gate-list
//! adversaries, the one-shot inner-product extraction circuit, and the claw
//! reductions for the concrete protocols.

pub mod claw;
pub mod gates;
pub mod gl;

pub use claw::{
    claw_from_kcvy, claw_from_simplified, trapdoor_kcvy_adversary, trapdoor_simplified_adversary,
    ExtractionOutcome, KcvyAdversary, SimplifiedAdversary,
};
pub use gates::{Gate, GateList, RegisterDef};
pub use gl::{gl_extract, standard_predictor, GlOutcome, InnerProductQuery, PredictorNoise};
