//! Closed-form and semi-analytic output probabilities for the periodic
//! post-measurement state `Σ_j |jr + l⟩` after an imperfect Fourier
//! transform.
//!
//! Angles of the form `2π·(integer)/q` are reduced with exact integer
//! arithmetic before any trigonometric call, which keeps the closed forms
//! accurate right up to their removable singularities.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::Distribution;

/// Below this `|sin(πcr/q + δr/2)|` the geometric-sum closed form is
/// replaced by direct summation.
pub const SINGULAR_TOLERANCE: f64 = 1e-9;

/// The periodic first-register state left after measuring the second
/// register: support `{jr + l : 0 ≤ j ≤ A}` inside `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicStateSpec {
    q: usize,
    r: usize,
    l: usize,
}

impl PeriodicStateSpec {
    pub fn new(q: usize, r: usize, l: usize) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::domain(format!("q = {q} is not a power of two >= 2")));
        }
        if r == 0 || r >= q {
            return Err(Error::domain(format!(
                "period r = {r} must satisfy 0 < r < q = {q}"
            )));
        }
        if l >= r {
            return Err(Error::domain(format!(
                "offset l = {l} must be below r = {r}"
            )));
        }
        Ok(Self { q, r, l })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn num_qubits(&self) -> usize {
        self.q.trailing_zeros() as usize
    }

    /// Number of support points `A + 1`: the count of `j ≥ 0` with
    /// `jr + l ≤ q − 1`.
    pub fn terms(&self) -> usize {
        (self.q - 1 - self.l) / self.r + 1
    }

    pub fn period_divides(&self) -> bool {
        self.q.is_multiple_of(self.r)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.terms()).map(move |j| j * self.r + self.l)
    }

    /// Ideal peak positions `kq/r` (only meaningful when `r | q`).
    pub fn ideal_peaks(&self) -> Vec<usize> {
        (0..self.r).map(|k| k * self.q / self.r).collect()
    }

    /// `1/√(q·(A+1))`, which equals `√r/q` when `r | q`.
    fn prefactor(&self) -> f64 {
        1.0 / ((self.q * self.terms()) as f64).sqrt()
    }
}

/// Splits `n` as `k·q + m` with `m ∈ (−q/2, q/2]`, returning `(k, m)`.
fn reduce_half(n: i128, q: i128) -> (i128, i128) {
    let mut m = n.rem_euclid(q);
    if 2 * m > q {
        m -= q;
    }
    ((n - m) / q, m)
}

fn sign(parity: i128) -> f64 {
    if parity.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `2π·n/q + x` with `n` reduced modulo `q` first.
fn turn_angle(n: i128, q: i128, x: f64) -> f64 {
    2.0 * PI * (n.rem_euclid(q) as f64) / q as f64 + x
}

/// `sin(π·n/q + x)` with `n` reduced modulo `q` first.
fn sin_half_turn(n: i128, q: i128, x: f64) -> f64 {
    let (k, m) = reduce_half(n, q);
    sign(k) * (PI * m as f64 / q as f64 + x).sin()
}

/// First-register amplitude factor after imperfect preparation:
/// `1 + δ·(2s − n)` where `s` is the number of set bits of `a`.
pub fn prep_amplitude_error(a: usize, delta: f64, n: usize) -> f64 {
    let s = a.count_ones() as f64;
    1.0 + delta * (2.0 * s - n as f64)
}

/// First-order combination `δ'' = δ_a + δ_c` of preparation and transform
/// amplitude errors.
pub fn combined_amp_error(delta_a: f64, delta_c: f64) -> f64 {
    delta_a + delta_c
}

/// Brute-force `f̃(c) = (1/√(q(A+1))) Σ_j e^{i(2πc/q + δ)(jr + l)}`.
pub fn ftilde_direct(c: usize, spec: &PeriodicStateSpec, delta: f64) -> Complex64 {
    let q = spec.q as i128;
    let sum: Complex64 = spec
        .support()
        .map(|a| {
            let angle = turn_angle(c as i128 * a as i128, q, delta * a as f64);
            Complex64::from_polar(1.0, angle)
        })
        .sum();
    sum * spec.prefactor()
}

/// `sin(θr/2)` and `sin((A+1)θr/2)` for `θ = 2πc/q + δ`.
fn dirichlet_sines(c: usize, spec: &PeriodicStateSpec, delta: f64) -> (f64, f64) {
    let q = spec.q as i128;
    let cr = c as i128 * spec.r as i128;
    let terms = spec.terms() as i128;
    let half_step = delta * spec.r as f64 / 2.0;
    let denom = sin_half_turn(cr, q, half_step);
    let numer = sin_half_turn(terms * cr, q, terms as f64 * half_step);
    (denom, numer)
}

/// Geometric-sum closed form of `f̃(c)` under a constant phase error `δ`:
///
/// `(1/√(q(A+1))) · e^{ilθ} · (1 − e^{iθ(A+1)r}) / (1 − e^{iθr})`, `θ = 2πc/q + δ`.
///
/// With `r | q` the prefactor is `√r/q` and `(A+1)r = q`. Near a zero of the
/// denominator the direct sum is returned instead.
pub fn ftilde_systematic(c: usize, spec: &PeriodicStateSpec, delta: f64) -> Complex64 {
    let (denom, numer) = dirichlet_sines(c, spec, delta);
    if denom.abs() <= SINGULAR_TOLERANCE {
        return ftilde_direct(c, spec, delta);
    }
    // (1 − e^{iMx})/(1 − e^{ix}) = e^{i(M−1)x/2}·sin(Mx/2)/sin(x/2) with x = θr.
    let q = spec.q as i128;
    let c = c as i128;
    let r = spec.r as i128;
    let l = spec.l as i128;
    let terms = spec.terms() as i128;
    let offset_phase = turn_angle(l * c, q, l as f64 * delta);
    let kernel_phase = turn_angle(
        (terms - 1) * c * r,
        2 * q,
        (terms - 1) as f64 * delta * r as f64 / 2.0,
    );
    // `turn_angle(n, 2q, ·)` gives 2π·n/(2q) = π·n/q, as required for (M−1)θr/2.
    let ratio = numer / denom;
    Complex64::from_polar(spec.prefactor() * ratio, offset_phase + kernel_phase)
}

/// Relative probability of `c` under a constant phase error:
///
/// `P_c = (r/q²) · sin²(δq/2) / sin²(πcr/q + δr/2)` when `r | q`, and
/// `|f̃(c)|²` in general. Singular points use the direct sum, so the
/// `δ → 0` limit `P_{kq/r} = 1/r` is attained continuously.
pub fn pc_systematic(c: usize, spec: &PeriodicStateSpec, delta: f64) -> f64 {
    let (denom, numer) = dirichlet_sines(c, spec, delta);
    if denom.abs() <= SINGULAR_TOLERANCE {
        return ftilde_direct(c, spec, delta).norm_sqr();
    }
    let pref = spec.prefactor();
    pref * pref * (numer * numer) / (denom * denom)
}

/// Errors `δ` at which the closed-form denominator `sin(πcr/q + δr/2)`
/// vanishes for output `c`: `δ = (2π/r)(k − cr/q)` for each `k`.
pub fn singular_deltas(
    spec: &PeriodicStateSpec,
    c: usize,
    ks: impl IntoIterator<Item = i64>,
) -> Vec<f64> {
    let r = spec.r as f64;
    let shift = (c * spec.r) as f64 / spec.q as f64;
    ks.into_iter()
        .map(|k| 2.0 * PI / r * (k as f64 - shift))
        .collect()
}

/// Double-sum form of `P_c` with per-term amplitude errors `δ_m` and phase
/// errors `δ'_m`:
///
/// `P_c = (r/q²) Σ_m Σ_k (1+δ_m)(1+δ_k) cos[(2πc/q)·r(m−k) + (mr+l)δ'_m − (kr+l)δ'_k]`.
///
/// Evaluated term by term in `O((A+1)²)`. For `r ∤ q` the prefactor is
/// `1/(q(A+1))`.
pub fn pc_double_sum(
    c: usize,
    spec: &PeriodicStateSpec,
    amp_errors: &[f64],
    phase_errors: &[f64],
) -> Result<f64> {
    let terms = spec.terms();
    if amp_errors.len() != terms || phase_errors.len() != terms {
        return Err(Error::domain(format!(
            "error arrays must have length A+1 = {terms}, got {} and {}",
            amp_errors.len(),
            phase_errors.len()
        )));
    }
    let q = spec.q as i128;
    let cr = c as i128 * spec.r as i128;
    let index_phase: Vec<f64> = spec
        .support()
        .zip(phase_errors)
        .map(|(a, d)| a as f64 * d)
        .collect();
    let mut total = 0.0;
    for m in 0..terms {
        let wm = 1.0 + amp_errors[m];
        for k in 0..terms {
            let wk = 1.0 + amp_errors[k];
            let diff = m as i128 - k as i128;
            let angle = turn_angle(cr * diff, q, index_phase[m] - index_phase[k]);
            total += wm * wk * angle.cos();
        }
    }
    let pref = spec.prefactor();
    Ok(pref * pref * total)
}

/// `pc_systematic` over every output index, as a relative distribution.
pub fn systematic_distribution(spec: &PeriodicStateSpec, delta: f64) -> Distribution {
    let probs = (0..spec.q).map(|c| pc_systematic(c, spec, delta)).collect();
    Distribution::new(probs, true).expect("squared moduli are non-negative")
}

/// `pc_double_sum` over every output index, as a relative distribution.
/// Rounding can push exact zeros slightly negative; those are clamped to 0.
pub fn double_sum_distribution(
    spec: &PeriodicStateSpec,
    amp_errors: &[f64],
    phase_errors: &[f64],
) -> Result<Distribution> {
    let probs = (0..spec.q)
        .map(|c| pc_double_sum(c, spec, amp_errors, phase_errors).map(|p| p.max(0.0)))
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(probs, true)
}
