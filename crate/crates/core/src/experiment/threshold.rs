use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{ErrorMode, ErrorModel};
use crate::shor::{success_probability, RecoveryPolicy, ShorInstance, SuccessEstimate};

/// Success target used when none is given.
pub const DEFAULT_TARGET: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub magnitude: f64,
    pub estimate: SuccessEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub n: u64,
    pub y: u64,
    pub mode: ErrorMode,
    pub target: f64,
    pub trials: u64,
    pub seed: u64,
    pub points: Vec<ThresholdPoint>,
    /// Largest magnitude such that it and every smaller grid magnitude reach
    /// the target; `None` when the first grid point already misses it.
    pub threshold: Option<f64>,
}

impl ThresholdReport {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.magnitude).collect()
    }
}

/// Estimates the success probability at each grid magnitude. Every grid
/// point reuses `seed`, so neighbouring points share their random streams.
pub fn threshold_sweep(
    instance: &ShorInstance,
    mode: ErrorMode,
    grid: &[f64],
    trials: u64,
    target: f64,
    seed: u64,
    policy: RecoveryPolicy,
) -> Result<ThresholdReport> {
    if grid.is_empty() {
        return Err(Error::domain("threshold grid is empty"));
    }
    if grid.iter().any(|g| !g.is_finite() || *g < 0.0) {
        return Err(Error::domain(
            "grid magnitudes must be finite and non-negative",
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("threshold grid must be strictly increasing"));
    }
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::domain(format!(
            "target {target} is not a probability"
        )));
    }
    let points = grid
        .iter()
        .map(|&magnitude| {
            let model = ErrorModel::with_magnitude(mode, magnitude)?.with_seed(seed);
            let estimate = success_probability(instance, &model, policy, trials, seed)?;
            Ok(ThresholdPoint {
                magnitude,
                estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let threshold = points
        .iter()
        .take_while(|p| p.estimate.p >= target)
        .last()
        .map(|p| p.magnitude);
    Ok(ThresholdReport {
        n: instance.n,
        y: instance.y,
        mode,
        target,
        trials,
        seed,
        points,
        threshold,
    })
}

/// Parses `a:b:steps` (inclusive linear grid) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::domain(format!("invalid grid '{text}': {what}"));
    let grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected a:b:steps"));
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad("start"))?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad("end"))?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad("steps"))?;
        match steps {
            0 => return Err(bad("steps must be positive")),
            1 => vec![a],
            _ => (0..steps)
                .map(|i| a + (b - a) * i as f64 / (steps - 1) as f64)
                .collect(),
        }
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad(s)))
            .collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() {
        return Err(bad("no values"));
    }
    Ok(grid)
}
