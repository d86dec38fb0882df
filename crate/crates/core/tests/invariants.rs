//! Cross-module invariants: sparsity of the honest pipeline, agreement
//! between the sequential-measurement adversary and the dense parity
//! formula, and the extraction rate floor across a bias grid.

use qkit_core::analysis::parity_success;
use qkit_core::extract::{gl_extract, standard_predictor, PredictorNoise};
use qkit_core::provers::{parity_adversary, Device};
use qkit_core::qsim::{append_inner_products, hadamard_collapse, superpose_claw};
use qkit_core::rng::experiment_rng;
use qkit_core::tcf::{self, TcfFamily};
use qkit_core::Bits;

/// The honest pipeline holds two amplitudes end to end, even at widths
/// where materializing 2^n terms would be impossible.
#[test]
fn honest_pipeline_stays_two_sparse_at_full_width() {
    let mut rng = experiment_rng(301, 0);
    // 40-bit domain: the collapse must sample d without enumerating 2^40.
    let (key, td) = tcf::gen(20, TcfFamily::Rabin, &mut rng).unwrap();
    let n = key.domain_bits();
    assert!(n >= 38, "modulus should be around 40 bits, got {n}");
    let x = qkit_core::provers::honest::sample_domain_element(&key, &mut rng).unwrap();
    let y = tcf::eval(&key, &x).unwrap();
    let claw = tcf::invert(&td, &key, &y).unwrap();

    let state = superpose_claw(&claw).unwrap();
    assert_eq!(state.term_count(), 2);
    let r0 = Bits::uniform(n, &mut rng);
    let r1 = Bits::uniform(n, &mut rng);
    let state = append_inner_products(&state, &r0, &r1, |v| tcf::preimage_type(&key, v)).unwrap();
    assert_eq!(state.term_count(), 2);
    let (d, qubit) = hadamard_collapse(&state, &mut rng).unwrap();
    assert_eq!(d.n_bits(), n);
    let norm = qubit.a0.norm_sqr() + qubit.a1.norm_sqr();
    assert!((norm - 1.0).abs() < 1e-12);
}

/// Sequential measurement frequencies match the dense norm formula.
#[test]
fn parity_adversary_matches_dense_prediction() {
    let mut rng = experiment_rng(302, 0);
    for trial in 0..20u64 {
        let dim = 2 + (trial as usize % 7);
        let device = Device::random(dim, trial % 2 == 0, &mut rng).unwrap();
        let predicted = parity_success(
            device.projector(0),
            device.projector(1),
            device.state(),
        )
        .unwrap();
        let trials = 20_000;
        let mut correct = 0u64;
        for _ in 0..trials {
            let pair = parity_adversary(&device, 1, 1, &mut rng).unwrap();
            correct += u64::from(pair.correct(1, 1));
        }
        let freq = correct as f64 / trials as f64;
        assert!(
            (freq - predicted).abs() < 0.01,
            "device {trial}: frequency {freq} vs predicted {predicted}"
        );
    }
}

/// Extraction succeeds at rate >= 4 eps^2 - 5 sigma across a bias grid,
/// with eps measured empirically first.
#[test]
fn extraction_rate_clears_the_bound_across_the_bias_grid() {
    let secret = Bits::from_u64(0b1101, 4).unwrap();
    let grid = [
        PredictorNoise::Rotation { epsilon: 0.1 },
        PredictorNoise::AndDefect, // eps = 1/4 with a genuinely lossy circuit
        PredictorNoise::Rotation { epsilon: 0.25 },
        PredictorNoise::Rotation { epsilon: 0.4 },
        PredictorNoise::Rotation { epsilon: 0.5 },
    ];
    for (i, noise) in grid.into_iter().enumerate() {
        let q = standard_predictor(&secret, noise).unwrap();
        let mut rng = experiment_rng(303, i as u64);
        let bias_trials = 20_000u64;
        let hits = q.empirical_hits(&secret, bias_trials, &mut rng).unwrap();
        let eps = hits as f64 / bias_trials as f64 - 0.5;

        let trials = 4_000u64;
        let mut successes = 0u64;
        for _ in 0..trials {
            successes += u64::from(gl_extract(&q, &mut rng).unwrap().candidate == secret);
        }
        let rate = successes as f64 / trials as f64;
        let floor = 4.0 * eps * eps;
        let sigma = (floor.clamp(0.01, 0.99) * (1.0 - floor.clamp(0.01, 0.99)) / trials as f64)
            .sqrt();
        assert!(
            rate >= floor - 5.0 * sigma,
            "{noise:?}: rate {rate} vs floor {floor} (eps {eps})"
        );
    }
}

/// Rotated-basis statistics are blind to a global sign on the qubit, which
/// justifies dropping the (-1)^(d.x0) phase in the collapse.
#[test]
fn global_phase_has_no_observable_effect() {
    use qkit_core::qsim::QubitState;
    let mut rng = experiment_rng(304, 0);
    for _ in 0..50 {
        use rand::Rng;
        let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let basis: f64 = rng.random_range(-1.0..1.0);
        let q = QubitState::plane(theta);
        let flipped = QubitState::new(-q.a0, -q.a1).unwrap();
        assert!((q.prob_zero(basis) - flipped.prob_zero(basis)).abs() < 1e-15);
    }
}
