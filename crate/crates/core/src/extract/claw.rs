//! Claw extraction from parity adversaries.
//!
//! For the simplified protocol, a guesser for c0*c1 = (-1)^(r.(x0||x1)) over
//! superposed r = r0||r1 is an inner-product query for the secret x0||x1;
//! one extraction round returns a claw candidate. For KCVY the secret is
//! x0+x1: extraction yields the difference, after which the adversary's
//! preimage answer on the post-measurement state completes the claw.


use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::tcf::{self, Claw, TcfKey, TcfTrapdoor};

use super::gates::{rotation_matrix, Gate, GateList, RegisterDef};
use super::gl::{gl_extract, InnerProductQuery, PredictorNoise};

/// Result of one extraction attempt.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractionOutcome {
    pub candidate: Bits,
    pub verified: bool,
    pub trials: u64,
}

/// Phase-A output plus the coherent phase-B guesser for the simplified
/// protocol: the guesser runs over registers ("x", 2n) (the superposed
/// r0||r1), ("aux", m), ("out", 1).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplifiedAdversary {
    pub y: Bits,
    pub guesser: InnerProductQuery,
}

/// KCVY adversary pieces: the guesser predicts r.(x0+x1) over superposed r
/// while carrying the claw register as its auxiliary state; the preimage
/// answer is read from that register afterwards. `flip_prob` models a
/// preimage test that fails with probability kappa by substituting `junk`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KcvyAdversary {
    pub y: Bits,
    pub guesser: InnerProductQuery,
    pub flip_prob: f64,
    pub junk: Bits,
}

fn claw_candidate(key: &TcfKey, x0: Bits, x1: Bits) -> (Bits, Bits, bool) {
    let verified = x0 != x1
        && match (tcf::eval(key, &x0), tcf::eval(key, &x1)) {
            (Ok(y0), Ok(y1)) => y0 == y1,
            _ => false,
        };
    (x0, x1, verified)
}

/// Runs the extraction of Theorem-style simplified adversaries: GL over the
/// doubled register, split the candidate, verify the collision.
pub fn claw_from_simplified<R: Rng + ?Sized>(
    adv: &SimplifiedAdversary,
    key: &TcfKey,
    rng: &mut R,
) -> Result<ExtractionOutcome> {
    let n = key.domain_bits();
    let (width, _, _) = adv.guesser.widths()?;
    if width != 2 * n {
        return Err(Error::Validation(format!(
            "guesser register width {width} does not match 2n = {}",
            2 * n
        )));
    }
    let out = gl_extract(&adv.guesser, rng)?;
    let (x0, x1) = out.candidate.split(n);
    let (x0, x1, verified) = claw_candidate(key, x0, x1);
    Ok(ExtractionOutcome {
        candidate: x0.concat(&x1),
        verified,
        trials: 1,
    })
}

/// Runs the two-stage KCVY extraction: difference first, then the preimage
/// answer from the post-measurement claw register.
pub fn claw_from_kcvy<R: Rng + ?Sized>(
    adv: &KcvyAdversary,
    key: &TcfKey,
    rng: &mut R,
) -> Result<ExtractionOutcome> {
    let n = key.domain_bits();
    let (width, aux, _) = adv.guesser.widths()?;
    if width != n || aux != n {
        return Err(Error::Validation(
            "kcvy guesser needs an n-bit r register and an n-bit claw register".into(),
        ));
    }
    let mut out = gl_extract(&adv.guesser, rng)?;
    let delta = out.candidate.clone();
    // Preimage stage on the post-measurement state.
    let measured = out.state.measure_register(n, n, rng);
    let x = if rng.random::<f64>() < adv.flip_prob {
        adv.junk.clone()
    } else {
        Bits::from_u64(measured, n)?
    };
    let partner = x.xor(&delta);
    let (x0, x1) = if x <= partner {
        (x, partner)
    } else {
        (partner, x)
    };
    let (x0, x1, verified) = claw_candidate(key, x0, x1);
    Ok(ExtractionOutcome {
        candidate: x0.concat(&x1),
        verified,
        trials: 1,
    })
}

fn predictor_gates(secret: &Bits, noise: PredictorNoise, aux_width: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    match noise {
        PredictorNoise::Rotation { epsilon } => {
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
    for i in 0..secret.n_bits() {
        if secret.bit(i) == 1 {
            gates.push(Gate::Cx {
                c: ("x".into(), i),
                t: ("out".into(), 0),
            });
        }
    }
    let _ = aux_width;
    gates
}

/// Builds a trapdoor-assisted simplified adversary with parity advantage
/// delta: it honestly reports y for a sampled claw and guesses the parity
/// via the known secret x0||x1, degraded by the requested noise.
pub fn trapdoor_simplified_adversary<R: Rng + ?Sized>(
    key: &TcfKey,
    trapdoor: &TcfTrapdoor,
    noise: PredictorNoise,
    rng: &mut R,
) -> Result<SimplifiedAdversary> {
    let claw = sample_claw(key, trapdoor, rng)?;
    let secret = claw.x0.concat(&claw.x1);
    let n2 = secret.n_bits();
    let guesser = InnerProductQuery {
        unitary: GateList {
            registers: vec![
                RegisterDef {
                    name: "x".into(),
                    width: n2,
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
            gates: predictor_gates(&secret, noise, 0),
        },
        aux_init: vec![[1.0, 0.0]],
    };
    Ok(SimplifiedAdversary {
        y: claw.y,
        guesser,
    })
}

/// Builds a trapdoor-assisted KCVY adversary: the claw superposition rides
/// in the auxiliary register (so the preimage stage can measure it), while
/// the guesser predicts r.(x0+x1) from the known difference.
pub fn trapdoor_kcvy_adversary<R: Rng + ?Sized>(
    key: &TcfKey,
    trapdoor: &TcfTrapdoor,
    noise: PredictorNoise,
    kappa: f64,
    rng: &mut R,
) -> Result<KcvyAdversary> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::Validation(format!("kappa {kappa} outside [0, 1]")));
    }
    let n = key.domain_bits();
    let claw = sample_claw(key, trapdoor, rng)?;
    let delta = claw.xor();
    let mut aux_init = vec![[0.0, 0.0]; 1 << n];
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    aux_init[claw.x0.to_u64() as usize] = [amp, 0.0];
    aux_init[claw.x1.to_u64() as usize] = [amp, 0.0];
    let guesser = InnerProductQuery {
        unitary: GateList {
            registers: vec![
                RegisterDef {
                    name: "x".into(),
                    width: n,
                },
                RegisterDef {
                    name: "aux".into(),
                    width: n,
                },
                RegisterDef {
                    name: "out".into(),
                    width: 1,
                },
            ],
            gates: predictor_gates(&delta, noise, n),
        },
        aux_init,
    };
    // A junk answer that never completes a claw: junk and junk + delta must
    // not collide under f.
    let mut junk = None;
    for v in 0..(1u64 << n) {
        let cand = Bits::from_u64(v, n)?;
        let partner = cand.xor(&delta);
        let collides = match (tcf::eval(key, &cand), tcf::eval(key, &partner)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        if !collides {
            junk = Some(cand);
            break;
        }
    }
    let junk = junk.ok_or_else(|| {
        Error::Validation("every string completes a claw; junk answers cannot fail".into())
    })?;
    Ok(KcvyAdversary {
        y: claw.y,
        guesser,
        flip_prob: kappa,
        junk,
    })
}

fn sample_claw<R: Rng + ?Sized>(
    key: &TcfKey,
    trapdoor: &TcfTrapdoor,
    rng: &mut R,
) -> Result<Claw> {
    let x = crate::provers::honest::sample_domain_element(key, rng)?;
    let y = tcf::eval(key, &x)?;
    tcf::invert(trapdoor, key, &y)
}
