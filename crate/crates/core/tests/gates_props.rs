use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use shor_noise::gates::*;
use shor_noise::{ErrorModel, RngStream, StateVector};

fn random_state(n: usize, rng: &mut RngStream) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

proptest! {
    #[test]
    fn gates_are_unitary(delta in -3.0f64..3.0) {
        prop_assert!(hadamard_gate(delta).unitarity_error() < 1e-12);
        prop_assert!(qft_hadamard_gate(delta).unitarity_error() < 1e-12);
    }

    #[test]
    fn hadamard_is_y_rotation(delta in -1.0f64..1.0) {
        let h = hadamard_gate(delta);
        let rot = SingleQubitGate::y_rotation(PI / 2.0 + 2.0 * delta);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((h.m[i][j] - rot.m[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn random_circuits_preserve_norm(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = RngStream::new(seed, 0);
        let mut state = random_state(n, &mut rng);
        for _ in 0..40 {
            let q = (rng.next_u64() % n as u64) as usize;
            let delta = rng.standard_normal() * 0.3;
            if n > 1 && rng.coin() {
                let t = (q + 1 + (rng.next_u64() % (n as u64 - 1)) as usize) % n;
                apply_controlled_phase(&mut state, q, t, &ControlledPhaseGate::with_phase(delta * 10.0)).unwrap();
            } else {
                apply_single_qubit(&mut state, q, &qft_hadamard_gate(delta)).unwrap();
            }
        }
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gate_then_inverse_is_identity(seed in any::<u64>(), delta in -0.5f64..0.5) {
        let mut rng = RngStream::new(seed, 1);
        let original = random_state(3, &mut rng);
        let mut s = original.clone();
        let g = hadamard_gate(delta);
        apply_single_qubit(&mut s, 1, &g).unwrap();
        apply_single_qubit(&mut s, 1, &g.adjoint()).unwrap();
        let b = controlled_phase_gate(0, 2, delta).unwrap();
        apply_controlled_phase(&mut s, 2, 0, &b).unwrap();
        apply_controlled_phase(&mut s, 2, 0, &b.inverse()).unwrap();
        prop_assert!(s.max_abs_diff(&original) < 1e-12);
    }
}

#[test]
fn uniform_errors_are_bounded_and_centred() {
    let model = ErrorModel::uniform(0.1).unwrap();
    let mut rng = RngStream::new(2024, 0);
    let draws: Vec<f64> = (0..1_000_000)
        .map(|_| sample_gate_error(&model, &mut rng))
        .collect();
    assert!(draws.iter().all(|d| d.abs() <= 0.1));
    let n = 100_000;
    let mean = draws[..n].iter().sum::<f64>() / n as f64;
    // sd of a U(-a, a) deviate is a/√3
    let sem = 0.1 / 3f64.sqrt() / (n as f64).sqrt();
    assert!(mean.abs() < 3.0 * sem, "mean {mean}");
    // both signs and the full range are reached
    assert!(draws.iter().any(|&d| d > 0.099));
    assert!(draws.iter().any(|&d| d < -0.099));
}

#[test]
fn gaussian_errors_have_requested_width() {
    let model = ErrorModel::gaussian(0.03).unwrap();
    let mut rng = RngStream::new(7, 3);
    let n = 100_000;
    let draws: Vec<f64> = (0..n)
        .map(|_| sample_gate_error(&model, &mut rng))
        .collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let sd = (draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    assert!((sd - 0.03).abs() < 0.05 * 0.03, "sd {sd}");
    // no clipping: 4σ excursions occur at this sample size
    assert!(draws.iter().any(|d| d.abs() > 4.0 * 0.03));
}

#[test]
fn combined_modes_add_offset() {
    let mut rng = RngStream::new(5, 0);
    let model = ErrorModel::combined_uniform(0.33, 0.02).unwrap();
    let draws: Vec<f64> = (0..10_000)
        .map(|_| sample_gate_error(&model, &mut rng))
        .collect();
    assert!(draws.iter().all(|d| (d - 0.33).abs() <= 0.02 + 1e-15));
    let model = ErrorModel::combined_gaussian(0.33, 0.02).unwrap();
    let n = 100_000;
    let mean = (0..n)
        .map(|_| sample_gate_error(&model, &mut rng))
        .sum::<f64>()
        / n as f64;
    assert!((mean - 0.33).abs() < 3.0 * 0.02 / (n as f64).sqrt());
}

#[test]
fn sampling_is_reproducible() {
    let model = ErrorModel::gaussian(0.1).unwrap();
    let draw = || {
        let mut rng = RngStream::new(99, 4);
        (0..50)
            .map(|_| sample_gate_error(&model, &mut rng).to_bits())
            .collect::<Vec<_>>()
    };
    assert_eq!(draw(), draw());
}
