use serde::{Deserialize, Serialize};

use crate::analytic::{systematic_distribution, PeriodicStateSpec};
use crate::error::{Error, Result};
use crate::state::Distribution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    /// `(c, height)`, tallest first.
    pub peaks: Vec<(usize, f64)>,
    pub ideal_positions: Vec<usize>,
    /// Largest cyclic distance from an ideal position to its nearest
    /// detected peak; `None` when nothing clears the threshold.
    pub max_shift: Option<usize>,
    /// Total variation distance from the error-free distribution.
    pub distortion: f64,
    pub threshold: f64,
}

impl PeakReport {
    /// `max_shift`, counting "no peaks" as the register size.
    pub fn shift_score(&self, q: usize) -> usize {
        self.max_shift.unwrap_or(q)
    }
}

fn cyclic_distance(a: usize, b: usize, q: usize) -> usize {
    let d = a.abs_diff(b) % q;
    d.min(q - d)
}

/// Finds local maxima (cyclic neighbours) above `mean + 3·stddev` and
/// compares them with the ideal peaks `round(kq/r)`.
pub fn detect_peaks(dist: &Distribution, spec: &PeriodicStateSpec) -> Result<PeakReport> {
    let q = spec.q();
    if dist.len() != q {
        return Err(Error::domain(format!(
            "distribution has {} entries, expected {q}",
            dist.len()
        )));
    }
    let p = dist.probs();
    let n = q as f64;
    let mean = p.iter().sum::<f64>() / n;
    let var = p.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let threshold = mean + 3.0 * var.sqrt();

    let mut peaks: Vec<(usize, f64)> = (0..q)
        .filter(|&c| {
            let prev = p[(c + q - 1) % q];
            let next = p[(c + 1) % q];
            p[c] > threshold && p[c] >= prev && p[c] >= next
        })
        .map(|c| (c, p[c]))
        .collect();
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let ideal_positions: Vec<usize> = (0..spec.r())
        .map(|k| ((k * q) as f64 / spec.r() as f64).round() as usize % q)
        .collect();
    let max_shift = if peaks.is_empty() {
        None
    } else {
        ideal_positions
            .iter()
            .map(|&ideal| {
                peaks
                    .iter()
                    .map(|&(c, _)| cyclic_distance(c, ideal, q))
                    .min()
                    .unwrap_or(q)
            })
            .max()
    };
    let reference = systematic_distribution(spec, 0.0);
    let distortion = dist.total_variation(&reference)?;
    Ok(PeakReport {
        peaks,
        ideal_positions,
        max_shift,
        distortion,
        threshold,
    })
}
