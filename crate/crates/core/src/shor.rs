//! End-to-end order finding: noisy preparation, classical modular
//! exponentiation, second-register measurement, noisy Fourier transform and
//! continued-fraction recovery of the period.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::PeriodicStateSpec;
use crate::error::{Error, Result};
use crate::gates::{apply_single_qubit, hadamard_gate, sample_gate_error, ErrorModel};
use crate::qft::noisy_qft;
use crate::rng::RngStream;
use crate::state::{sample_weighted, StateVector, MAX_QUBITS};

/// Upper bound on the multiplier tried when boosting a convergent
/// denominator.
pub const DEFAULT_BOOST_CAP: u64 = 64;

/// Two-sided 95% normal quantile used for Wilson intervals.
const Z_95: f64 = 1.959_963_984_540_054;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut base = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}

/// Smallest `r > 0` with `y^r ≡ 1 (mod n)`, by direct iteration.
///
/// A shared factor between `y` and `n` is reported as [`Error::LuckyFactor`].
pub fn multiplicative_order(y: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain(format!("modulus {n} must be at least 2")));
    }
    let g = gcd(y % n, n);
    if g != 1 {
        // gcd(0, n) = n: y is a multiple of n and shares every factor.
        return Err(Error::LuckyFactor { y, n, factor: g });
    }
    let y = y % n;
    let mut value = y;
    let mut r = 1;
    while value != 1 {
        value = (value as u128 * y as u128 % n as u128) as u64;
        r += 1;
    }
    Ok(r)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An order-finding problem: factor `n` using base `y` on an `L`-qubit
/// first register with `n² ≤ 2^L < 2n²`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShorInstance {
    pub n: u64,
    pub y: u64,
    pub num_qubits: usize,
    pub q: usize,
    pub order: u64,
}

impl ShorInstance {
    pub fn new(n: u64, y: u64) -> Result<Self> {
        if n < 15 || n.is_multiple_of(2) || is_prime(n) {
            return Err(Error::domain(format!(
                "N = {n} must be an odd composite number >= 15"
            )));
        }
        if y <= 1 || y >= n {
            return Err(Error::domain(format!(
                "base y = {y} must satisfy 1 < y < N = {n}"
            )));
        }
        let order = multiplicative_order(y, n)?;
        let n_sq = n as u128 * n as u128;
        let num_qubits = (128 - (n_sq - 1).leading_zeros()) as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::Resource(format!(
                "N = {n} needs {num_qubits} qubits, limit is {MAX_QUBITS}"
            )));
        }
        Ok(Self {
            n,
            y,
            num_qubits,
            q: 1 << num_qubits,
            order,
        })
    }

    /// `y^a mod n` for every first-register value `a`.
    pub fn power_table(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.q);
        let mut v = 1 % self.n;
        for _ in 0..self.q {
            out.push(v);
            v = (v as u128 * self.y as u128 % self.n as u128) as u64;
        }
        out
    }

    /// The periodic state seen after the second register reads `y^l`.
    pub fn periodic_spec(&self, l: usize) -> Result<PeriodicStateSpec> {
        PeriodicStateSpec::new(self.q, self.order as usize, l)
    }
}

/// Joint state `Σ_a ψ_a |a⟩|y^a mod n⟩`, stored per second-register value.
#[derive(Debug, Clone)]
pub struct EntangledRegisters {
    num_qubits: usize,
    classes: BTreeMap<u64, Vec<(usize, Complex64)>>,
}

impl EntangledRegisters {
    pub fn new(instance: &ShorInstance, first: &StateVector) -> Result<Self> {
        if first.num_qubits() != instance.num_qubits {
            return Err(Error::domain(format!(
                "first register has {} qubits, instance needs {}",
                first.num_qubits(),
                instance.num_qubits
            )));
        }
        let mut classes: BTreeMap<u64, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (a, (&z, &amp)) in instance
            .power_table()
            .iter()
            .zip(first.amplitudes())
            .enumerate()
        {
            classes.entry(z).or_default().push((a, amp));
        }
        Ok(Self {
            num_qubits: first.num_qubits(),
            classes,
        })
    }

    /// Probability of each second-register outcome.
    pub fn marginal(&self) -> BTreeMap<u64, f64> {
        self.classes
            .iter()
            .map(|(&z, members)| (z, members.iter().map(|(_, a)| a.norm_sqr()).sum()))
            .collect()
    }

    pub fn class(&self, z: u64) -> Option<&[(usize, Complex64)]> {
        self.classes.get(&z).map(Vec::as_slice)
    }

    /// Measures the second register; returns the outcome and the normalized
    /// first-register state it leaves behind.
    pub fn measure_second(&self, rng: &mut RngStream) -> Result<(u64, StateVector)> {
        let outcomes: Vec<(u64, f64)> = self.marginal().into_iter().collect();
        let weights: Vec<f64> = outcomes.iter().map(|(_, w)| *w).collect();
        let pick = sample_weighted(&weights, rng)?;
        let (z, weight) = outcomes[pick];
        let scale = 1.0 / weight.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.num_qubits];
        for &(a, amp) in &self.classes[&z] {
            amps[a] = amp * scale;
        }
        Ok((z, StateVector::from_amplitudes(amps)?))
    }
}

/// One noisy Hadamard per qubit applied to `|0…0⟩`, each with a fresh
/// error draw.
pub fn prepare_uniform_noisy(
    num_qubits: usize,
    model: &ErrorModel,
    rng: &mut RngStream,
) -> Result<StateVector> {
    let mut state = StateVector::new_basis_state(num_qubits, 0)?;
    for qubit in 0..num_qubits {
        let delta = sample_gate_error(model, rng);
        apply_single_qubit(&mut state, qubit, &hadamard_gate(delta))?;
    }
    Ok(state)
}

/// Uniform amplitude `1/√(A+1)` on `{jr + l}`.
pub fn post_measurement_state(spec: &PeriodicStateSpec) -> Result<StateVector> {
    let amp = Complex64::new(1.0 / (spec.terms() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); spec.q()];
    for a in spec.support() {
        amps[a] = amp;
    }
    StateVector::from_amplitudes(amps)
}

/// Convergents `(h, d)` of `c/q`, in order.
pub fn convergents(c: u64, q: u64) -> Vec<(u64, u64)> {
    let (mut num, mut den) = (c as u128, q as u128);
    let (mut h_prev, mut h) = (0u128, 1u128);
    let (mut k_prev, mut k) = (1u128, 0u128);
    let mut out = Vec::new();
    while den != 0 {
        let a = num / den;
        (h_prev, h) = (h, a * h + h_prev);
        (k_prev, k) = (k, a * k + k_prev);
        out.push((h as u64, k as u64));
        (num, den) = (den, num - a * den);
    }
    out
}

/// Convergent denominators `d < n` of `c/q` with `|c/q − h/d| ≤ 1/(2q)`,
/// smallest first.
fn candidate_denominators(c: u64, q: u64, n: u64) -> Vec<u64> {
    convergents(c, q)
        .into_iter()
        .filter(|&(h, d)| {
            d > 0
                && d < n
                && 2 * (c as i128 * d as i128 - h as i128 * q as i128).unsigned_abs() <= d as u128
        })
        .map(|(_, d)| d)
        .collect()
}

/// Smallest continued-fraction candidate for the period, without checking
/// it against a base. `c = 0` carries no information.
pub fn recover_period(c: u64, q: u64, n: u64) -> Option<u64> {
    if c == 0 || c >= q {
        return None;
    }
    candidate_denominators(c, q, n).into_iter().next()
}

/// How a candidate denominator is turned into a verified period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum RecoveryPolicy {
    /// Accept a convergent denominator only if it satisfies `y^d ≡ 1` itself.
    #[default]
    Convergent,
    /// Also try `m·d` for `m ≤ min(⌈n/d⌉, cap)`.
    Boosted { cap: u64 },
}

/// Continued-fraction recovery verified against `y^d ≡ 1 (mod n)`.
pub fn recover_period_verified(
    c: u64,
    q: u64,
    n: u64,
    y: u64,
    policy: RecoveryPolicy,
) -> Option<u64> {
    if c == 0 || c >= q {
        return None;
    }
    let verifies = |d: u64| mod_pow(y, d, n) == 1;
    for d in candidate_denominators(c, q, n) {
        match policy {
            RecoveryPolicy::Convergent => {
                if verifies(d) {
                    return Some(d);
                }
            }
            RecoveryPolicy::Boosted { cap } => {
                let max_m = n.div_ceil(d).min(cap).max(1);
                if let Some(m) = (1..=max_m).find(|&m| verifies(m * d)) {
                    return Some(m * d);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    /// Second-register outcome `z = y^l mod n`.
    pub measured_z: u64,
    /// Smallest first-register value in the measured class.
    pub measured_l: usize,
    pub measured_c: usize,
    pub recovered_r: Option<u64>,
    pub success: bool,
    pub transcript_seed: u64,
    pub stream_id: u64,
}

/// Runs one complete noisy order-finding trial.
pub fn simulate_full_run(
    instance: &ShorInstance,
    model: &ErrorModel,
    policy: RecoveryPolicy,
    rng: &mut RngStream,
) -> Result<TrialResult> {
    let first = prepare_uniform_noisy(instance.num_qubits, model, rng)?;
    let joint = EntangledRegisters::new(instance, &first)?;
    let (z, collapsed) = joint.measure_second(rng)?;
    let measured_l = joint
        .class(z)
        .and_then(|members| members.first())
        .map(|&(a, _)| a)
        .unwrap_or_default();
    let report = noisy_qft(&collapsed, model, rng);
    let dist = report.output.to_distribution(true)?;
    let c = dist.sample_index(rng)?;
    let recovered_r =
        recover_period_verified(c as u64, instance.q as u64, instance.n, instance.y, policy);
    Ok(TrialResult {
        measured_z: z,
        measured_l,
        measured_c: c,
        recovered_r,
        success: recovered_r == Some(instance.order),
        transcript_seed: rng.seed(),
        stream_id: rng.stream_id(),
    })
}

/// Fraction of successes with its Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessEstimate {
    pub successes: u64,
    pub trials: u64,
    pub p: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SuccessEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials);
        Self {
            successes,
            trials,
            p: successes as f64 / trials as f64,
            ci_low,
            ci_high,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Runs `trials` independent trials (trial `t` uses stream `t` of `seed`).
pub fn run_trials(
    instance: &ShorInstance,
    model: &ErrorModel,
    policy: RecoveryPolicy,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrialResult>> {
    (0..trials)
        .into_par_iter()
        .map(|t| simulate_full_run(instance, model, policy, &mut RngStream::new(seed, t)))
        .collect()
}

pub fn success_probability(
    instance: &ShorInstance,
    model: &ErrorModel,
    policy: RecoveryPolicy,
    trials: u64,
    seed: u64,
) -> Result<SuccessEstimate> {
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    let results = run_trials(instance, model, policy, trials, seed)?;
    let successes = results.iter().filter(|t| t.success).count() as u64;
    Ok(SuccessEstimate::from_counts(successes, trials))
}
