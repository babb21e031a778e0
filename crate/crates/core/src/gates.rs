//! Perfect and imperfect elementary gates, the gate-error sampler, and the
//! kernels that apply gates to a [`StateVector`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::state::StateVector;

/// Which family of gate errors is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorMode {
    #[serde(rename = "none")]
    None,
    /// Systematic: every gate is off by the same `delta0`.
    #[serde(rename = "em1")]
    Em1,
    #[serde(rename = "em2u")]
    Em2Uniform,
    #[serde(rename = "em2g")]
    Em2Gauss,
    /// Systematic offset plus a uniform random deviate.
    #[serde(rename = "em3u")]
    Em3Uniform,
    #[serde(rename = "em3g")]
    Em3Gauss,
}

impl ErrorMode {
    pub const ALL: [ErrorMode; 6] = [
        ErrorMode::None,
        ErrorMode::Em1,
        ErrorMode::Em2Uniform,
        ErrorMode::Em2Gauss,
        ErrorMode::Em3Uniform,
        ErrorMode::Em3Gauss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ErrorMode::None => "none",
            ErrorMode::Em1 => "em1",
            ErrorMode::Em2Uniform => "em2u",
            ErrorMode::Em2Gauss => "em2g",
            ErrorMode::Em3Uniform => "em3u",
            ErrorMode::Em3Gauss => "em3g",
        }
    }

    pub fn is_random(self) -> bool {
        !matches!(self, ErrorMode::None | ErrorMode::Em1)
    }
}

impl fmt::Display for ErrorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ErrorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ErrorMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::domain(format!("unknown error mode '{s}'")))
    }
}

/// Gate-error model: a mode plus its parameters (all angles in radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub mode: ErrorMode,
    pub delta0: f64,
    pub s_max: f64,
    pub sigma0: f64,
    pub seed: u64,
}

impl ErrorModel {
    pub fn new(mode: ErrorMode, delta0: f64, s_max: f64, sigma0: f64, seed: u64) -> Result<Self> {
        for (name, v) in [("delta0", delta0), ("s_max", s_max), ("sigma0", sigma0)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {v}")));
            }
        }
        if s_max < 0.0 {
            return Err(Error::domain(format!("s_max must be >= 0, got {s_max}")));
        }
        if sigma0 < 0.0 {
            return Err(Error::domain(format!("sigma0 must be >= 0, got {sigma0}")));
        }
        Ok(Self {
            mode,
            delta0,
            s_max,
            sigma0,
            seed,
        })
    }

    pub fn none() -> Self {
        Self {
            mode: ErrorMode::None,
            delta0: 0.0,
            s_max: 0.0,
            sigma0: 0.0,
            seed: 0,
        }
    }

    pub fn systematic(delta0: f64) -> Result<Self> {
        Self::new(ErrorMode::Em1, delta0, 0.0, 0.0, 0)
    }

    pub fn uniform(s_max: f64) -> Result<Self> {
        Self::new(ErrorMode::Em2Uniform, 0.0, s_max, 0.0, 0)
    }

    pub fn gaussian(sigma0: f64) -> Result<Self> {
        Self::new(ErrorMode::Em2Gauss, 0.0, 0.0, sigma0, 0)
    }

    pub fn combined_uniform(delta0: f64, s_max: f64) -> Result<Self> {
        Self::new(ErrorMode::Em3Uniform, delta0, s_max, 0.0, 0)
    }

    pub fn combined_gaussian(delta0: f64, sigma0: f64) -> Result<Self> {
        Self::new(ErrorMode::Em3Gauss, delta0, 0.0, sigma0, 0)
    }

    /// Model of `mode` whose single free parameter is set to `magnitude`.
    /// EM3 modes use `magnitude` for both the offset and the random width.
    pub fn with_magnitude(mode: ErrorMode, magnitude: f64) -> Result<Self> {
        match mode {
            ErrorMode::None => Ok(Self::none()),
            ErrorMode::Em1 => Self::systematic(magnitude),
            ErrorMode::Em2Uniform => Self::uniform(magnitude),
            ErrorMode::Em2Gauss => Self::gaussian(magnitude),
            ErrorMode::Em3Uniform => Self::combined_uniform(magnitude, magnitude),
            ErrorMode::Em3Gauss => Self::combined_gaussian(magnitude, magnitude),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Systematic offset actually in effect (EM2 modes ignore `delta0`).
    pub fn effective_delta0(&self) -> f64 {
        match self.mode {
            ErrorMode::Em1 | ErrorMode::Em3Uniform | ErrorMode::Em3Gauss => self.delta0,
            _ => 0.0,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        match self.mode {
            ErrorMode::None => true,
            ErrorMode::Em1 => self.delta0 == 0.0,
            ErrorMode::Em2Uniform => self.s_max == 0.0,
            ErrorMode::Em2Gauss => self.sigma0 == 0.0,
            ErrorMode::Em3Uniform => self.delta0 == 0.0 && self.s_max == 0.0,
            ErrorMode::Em3Gauss => self.delta0 == 0.0 && self.sigma0 == 0.0,
        }
    }
}

/// Draws one gate error `δ = δ₀ + s`.
///
/// Uniform deviates are `±s_max·u(0,1)` with an independent fair sign, i.e.
/// symmetric uniform on `[−s_max, s_max]`. Gaussian deviates are not clipped.
pub fn sample_gate_error(model: &ErrorModel, rng: &mut RngStream) -> f64 {
    let offset = model.effective_delta0();
    match model.mode {
        ErrorMode::None => 0.0,
        ErrorMode::Em1 => offset,
        ErrorMode::Em2Uniform | ErrorMode::Em3Uniform => {
            let magnitude = model.s_max * rng.uniform();
            if rng.coin() {
                offset + magnitude
            } else {
                offset - magnitude
            }
        }
        ErrorMode::Em2Gauss | ErrorMode::Em3Gauss => offset + model.sigma0 * rng.standard_normal(),
    }
}

/// 2×2 complex matrix acting on one qubit, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitGate {
    pub m: [[Complex64; 2]; 2],
}

impl SingleQubitGate {
    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self {
            m: [[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]],
        }
    }

    pub fn identity() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn pauli_z() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    /// `cos(θ/2)·I − i·sin(θ/2)·σ_y`, i.e. `[[cos, −sin], [sin, cos]]` of θ/2.
    pub fn y_rotation(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::from_real([[c, -s], [s, c]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &SingleQubitGate) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m }
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint().compose(self);
        let id = Self::identity();
        p.m.iter()
            .flatten()
            .zip(id.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Imperfect Walsh-Hadamard in rotation form: a y-rotation by `π/2 + 2δ`,
///
/// `(1/√2)·[[cos δ − sin δ, −(sin δ + cos δ)], [sin δ + cos δ, cos δ − sin δ]]`.
///
/// The exact trigonometric matrix is returned for every `δ`; `|δ| ≥ π/4`
/// leaves the small-error regime and is logged (once per process).
pub fn hadamard_gate(delta: f64) -> SingleQubitGate {
    static WARNED: AtomicBool = AtomicBool::new(false);
    if delta.abs() >= FRAC_PI_4 && !WARNED.swap(true, Ordering::Relaxed) {
        log::warn!("hadamard error {delta} rad is outside the small-error range |delta| < pi/4");
    }
    let (s, c) = delta.sin_cos();
    let diag = FRAC_1_SQRT_2 * (c - s);
    let off = FRAC_1_SQRT_2 * (s + c);
    SingleQubitGate::from_real([[diag, -off], [off, diag]])
}

/// The Hadamard used inside the Fourier circuit: `hadamard_gate(δ) · Z`.
///
/// At `δ = 0` this is the textbook `(1/√2)[[1, 1], [1, −1]]`; the rotation
/// part carries the error. On `|0⟩` it acts exactly like [`hadamard_gate`].
pub fn qft_hadamard_gate(delta: f64) -> SingleQubitGate {
    hadamard_gate(delta).compose(&SingleQubitGate::pauli_z())
}

/// `diag(1, 1, 1, e^{i·phase})` on a (control, target) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlledPhaseGate {
    pub phase: f64,
}

impl ControlledPhaseGate {
    pub fn with_phase(phase: f64) -> Self {
        Self { phase }
    }

    pub fn inverse(&self) -> Self {
        Self { phase: -self.phase }
    }
}

/// `B_jk` with phase `π/2^{k−j} + δ`.
pub fn controlled_phase_gate(j: usize, k: usize, delta: f64) -> Result<ControlledPhaseGate> {
    if k <= j {
        return Err(Error::domain(format!(
            "controlled phase needs k > j, got j={j}, k={k}"
        )));
    }
    let ideal = PI / 2f64.powi((k - j) as i32);
    Ok(ControlledPhaseGate::with_phase(ideal + delta))
}

pub fn apply_single_qubit(
    state: &mut StateVector,
    qubit: usize,
    gate: &SingleQubitGate,
) -> Result<()> {
    let n = state.num_qubits();
    if qubit >= n {
        return Err(Error::domain(format!(
            "qubit {qubit} out of range for {n} qubits"
        )));
    }
    let stride = 1usize << qubit;
    let [[g00, g01], [g10, g11]] = gate.m;
    let amps = state.amplitudes_mut();
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let x0 = *a0;
            let x1 = *a1;
            *a0 = g00 * x0 + g01 * x1;
            *a1 = g10 * x0 + g11 * x1;
        }
    }
    Ok(())
}

pub fn apply_controlled_phase(
    state: &mut StateVector,
    control: usize,
    target: usize,
    gate: &ControlledPhaseGate,
) -> Result<()> {
    let n = state.num_qubits();
    if control >= n || target >= n {
        return Err(Error::domain(format!(
            "qubits ({control}, {target}) out of range for {n} qubits"
        )));
    }
    if control == target {
        return Err(Error::domain(format!(
            "control and target are both qubit {control}"
        )));
    }
    let mask = (1usize << control) | (1usize << target);
    let factor = Complex64::from_polar(1.0, gate.phase);
    for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
        if i & mask == mask {
            *a *= factor;
        }
    }
    Ok(())
}
