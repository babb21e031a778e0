//! Dense statevectors and measurement distributions.
//!
//! Basis index `a` is the integer value of the register with qubit 0 as the
//! least-significant bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Largest register width the dense representation accepts (16M amplitudes).
pub const MAX_QUBITS: usize = 24;

/// Tolerance on `|‖ψ‖² − 1|` below which a state counts as normalized.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_width(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::domain("register needs at least one qubit"));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::Resource(format!(
            "{num_qubits} qubits exceeds the dense limit of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn new_basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::domain(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps an amplitude array; the length must be a power of two.
    /// No normalization is applied or checked.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::domain(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_width(num_qubits)?;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Equal superposition `(1/√q) Σ_a |a⟩`.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![amp; dim],
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest entrywise modulus of the difference to `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Born-rule probabilities `|ψ_c|²`.
    ///
    /// With `normalize` the result is divided by its sum and marked absolute;
    /// otherwise it is marked relative whenever the state is off unit norm.
    pub fn to_distribution(&self, normalize: bool) -> Result<Distribution> {
        let probs: Vec<f64> = self.amplitudes.iter().map(|a| a.norm_sqr()).collect();
        let total: f64 = probs.iter().sum();
        if normalize {
            if total <= 0.0 {
                return Err(Error::Degenerate(
                    "cannot normalize an all-zero state".into(),
                ));
            }
            Ok(Distribution {
                probs: probs.into_iter().map(|p| p / total).collect(),
                relative: false,
            })
        } else {
            Ok(Distribution {
                probs,
                relative: (total - 1.0).abs() > NORM_TOLERANCE,
            })
        }
    }
}

/// Probabilities (or relative probabilities) over output indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    probs: Vec<f64>,
    relative: bool,
}

impl Distribution {
    pub fn new(probs: Vec<f64>, relative: bool) -> Result<Self> {
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && **p >= 0.0))
        {
            return Err(Error::domain(format!("probability {p} at index {i}")));
        }
        if !relative {
            let total: f64 = probs.iter().sum();
            if (total - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::domain(format!(
                    "absolute distribution sums to {total}"
                )));
            }
        }
        Ok(Self { probs, relative })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn is_relative(&self) -> bool {
        self.relative
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn normalized(&self) -> Result<Distribution> {
        let total = self.total();
        if total <= 0.0 {
            return Err(Error::Degenerate("distribution has zero mass".into()));
        }
        Ok(Distribution {
            probs: self.probs.iter().map(|p| p / total).collect(),
            relative: false,
        })
    }

    /// Total variation distance between the normalized forms of both
    /// distributions.
    pub fn total_variation(&self, other: &Distribution) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::domain("distributions differ in length"));
        }
        let a = self.normalized()?;
        let b = other.normalized()?;
        Ok(0.5
            * a.probs
                .iter()
                .zip(&b.probs)
                .map(|(x, y)| (x - y).abs())
                .sum::<f64>())
    }

    /// Draws an index `c` with probability `probs[c] / Σ probs`.
    pub fn sample_index(&self, rng: &mut RngStream) -> Result<usize> {
        sample_weighted(&self.probs, rng)
    }
}

/// Inverse-CDF draw from non-negative weights.
pub fn sample_weighted(weights: &[f64], rng: &mut RngStream) -> Result<usize> {
    let total: f64 = weights.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::Degenerate(
            "cannot sample a zero-sum distribution".into(),
        ));
    }
    let target = rng.uniform() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_nonzero = i;
            if target < acc {
                return Ok(i);
            }
        }
    }
    // Rounding can leave `target` just above the accumulated sum.
    Ok(last_nonzero)
}
