//! The discrete Fourier transform three ways: the gate-level circuit with
//! per-gate errors, the per-input-index error model, and a direct-summation
//! reference.
//!
//! All three map `|a⟩ → (1/√q) Σ_c e^{2πi·ac/q} |c⟩` in the error-free case,
//! with `c` carrying its ordinary integer meaning (the circuit output is
//! bit-reversed back before it is returned).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{
    apply_controlled_phase, apply_single_qubit, controlled_phase_gate, qft_hadamard_gate,
    sample_gate_error, ErrorModel,
};
use crate::rng::RngStream;
use crate::state::StateVector;

/// Largest register accepted by [`exact_dft`], whose cost is `O(4^L)`.
pub const MAX_EXACT_DFT_QUBITS: usize = 16;

/// Result of one gate-level Fourier transform.
#[derive(Debug, Clone)]
pub struct QftReport {
    pub num_qubits: usize,
    pub model: ErrorModel,
    /// Error drawn for each gate, in application order.
    pub deltas: Vec<f64>,
    pub output: StateVector,
}

/// `L` Hadamards plus `L(L−1)/2` controlled phases.
pub fn qft_gate_count(num_qubits: usize) -> usize {
    num_qubits * (num_qubits + 1) / 2
}

/// Runs the Fourier circuit with an independent error draw per gate.
pub fn noisy_qft(state: &StateVector, model: &ErrorModel, rng: &mut RngStream) -> QftReport {
    let n = state.num_qubits();
    let deltas: Vec<f64> = (0..qft_gate_count(n))
        .map(|_| sample_gate_error(model, rng))
        .collect();
    let output = replay_qft(state, &deltas).expect("transcript length matches gate count");
    QftReport {
        num_qubits: n,
        model: *model,
        deltas,
        output,
    }
}

/// Applies the Fourier circuit with the given per-gate errors.
///
/// Stage `j` (from the most significant qubit down) is a Hadamard on that
/// qubit followed by `B_jk` against each less significant qubit `k`; the
/// transcript lists the stages in that order. A final bit reversal restores
/// the natural output order.
pub fn replay_qft(state: &StateVector, deltas: &[f64]) -> Result<StateVector> {
    let n = state.num_qubits();
    if deltas.len() != qft_gate_count(n) {
        return Err(Error::domain(format!(
            "transcript has {} entries, circuit on {n} qubits has {} gates",
            deltas.len(),
            qft_gate_count(n)
        )));
    }
    let wire = |stage: usize| n - 1 - stage;
    let mut out = state.clone();
    let mut next = deltas.iter().copied();
    for j in 0..n {
        let delta = next.next().unwrap_or_default();
        apply_single_qubit(&mut out, wire(j), &qft_hadamard_gate(delta))?;
        for k in j + 1..n {
            let delta = next.next().unwrap_or_default();
            let gate = controlled_phase_gate(j, k, delta)?;
            apply_controlled_phase(&mut out, wire(k), wire(j), &gate)?;
        }
    }
    bit_reverse_in_place(out.amplitudes_mut());
    Ok(out)
}

/// Reorders amplitudes so that index `i` moves to its bit-reversed position.
pub fn bit_reverse_in_place(amps: &mut [Complex64]) {
    let len = amps.len();
    debug_assert!(len.is_power_of_two());
    let bits = len.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..len {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            amps.swap(i, j);
        }
    }
}

fn roots_of_unity(q: usize) -> Vec<Complex64> {
    (0..q)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / q as f64))
        .collect()
}

/// Reference transform by direct `O(q²)` summation.
pub fn exact_dft(state: &StateVector) -> Result<StateVector> {
    let n = state.num_qubits();
    if n > MAX_EXACT_DFT_QUBITS {
        return Err(Error::Resource(format!(
            "direct DFT limited to {MAX_EXACT_DFT_QUBITS} qubits, got {n}"
        )));
    }
    let q = state.dim();
    let roots = roots_of_unity(q);
    let scale = 1.0 / (q as f64).sqrt();
    let input = state.amplitudes();
    let out: Vec<Complex64> = (0..q)
        .map(|c| {
            let sum: Complex64 = input
                .iter()
                .enumerate()
                .filter(|(_, x)| x.norm_sqr() > 0.0)
                .map(|(a, x)| roots[(a * c) % q] * x)
                .sum();
            sum * scale
        })
        .collect();
    StateVector::from_amplitudes(out)
}

/// Fourier transform with per-input-index errors:
///
/// `out_c = (1/√q) Σ_a (1 + amp_errors[a]) · e^{i(2πc/q + phase_errors[a])·a} · in_a`.
///
/// Amplitude errors make the map non-unitary, so the output may be
/// unnormalized.
pub fn modeled_dft(
    state: &StateVector,
    phase_errors: &[f64],
    amp_errors: &[f64],
) -> Result<StateVector> {
    let q = state.dim();
    if phase_errors.len() != q || amp_errors.len() != q {
        return Err(Error::domain(format!(
            "error arrays must have length {q}, got {} and {}",
            phase_errors.len(),
            amp_errors.len()
        )));
    }
    if state.num_qubits() > MAX_EXACT_DFT_QUBITS {
        return Err(Error::Resource(format!(
            "modeled DFT limited to {MAX_EXACT_DFT_QUBITS} qubits"
        )));
    }
    let roots = roots_of_unity(q);
    let scale = 1.0 / (q as f64).sqrt();
    // Input-side factor (1 + ε_a)·e^{iφ_a·a}·in_a is independent of c.
    let weighted: Vec<(usize, Complex64)> = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, x)| x.norm_sqr() > 0.0)
        .map(|(a, x)| {
            let w = Complex64::from_polar(1.0 + amp_errors[a], phase_errors[a] * a as f64);
            (a, w * x)
        })
        .collect();
    let out: Vec<Complex64> = (0..q)
        .map(|c| {
            let sum: Complex64 = weighted.iter().map(|&(a, x)| roots[(a * c) % q] * x).sum();
            sum * scale
        })
        .collect();
    StateVector::from_amplitudes(out)
}
