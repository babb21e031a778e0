//! The four output-distribution figures for `q = 128`, `r = 4`.
//!
//! 1. no errors;
//! 2. systematic errors `δ ∈ {0.02, 0.03, 0.05}`, and `{0.1, 0.33}` overlaid;
//! 3. uniform random errors `s_max ∈ {0.01, 0.03, 0.05, 0.1}`;
//! 4. Gaussian random errors `σ₀ ∈ {0.01, 0.03, 0.05}`, then `δ₀ = 0.33`
//!    with `σ₀ = 0.02`.
//!
//! Random subfigures draw one phase error per support term `j` (amplitude
//! errors are zero) and evaluate the double sum; the gate-level variant runs
//! the noisy circuit on the periodic state instead.

use serde::{Deserialize, Serialize};

use crate::analytic::{double_sum_distribution, systematic_distribution, PeriodicStateSpec};
use crate::error::{Error, Result};
use crate::gates::{sample_gate_error, ErrorMode, ErrorModel};
use crate::qft::noisy_qft;
use crate::rng::RngStream;
use crate::shor::post_measurement_state;
use crate::state::Distribution;

use super::TOOL_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubfigureSpec {
    /// 1-based panel number; overlaid curves share a panel.
    pub panel: u32,
    pub model: ErrorModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureSpec {
    pub figure: u32,
    pub q: usize,
    pub r: usize,
    pub l: usize,
    pub subfigures: Vec<SubfigureSpec>,
    /// Realizations averaged per random subfigure.
    pub trials: u32,
    pub seed: u64,
    pub gate_level: bool,
}

fn sub(panel: u32, model: Result<ErrorModel>) -> SubfigureSpec {
    SubfigureSpec {
        panel,
        model: model.expect("figure parameters are valid"),
    }
}

impl FigureSpec {
    /// Standard parameters of figure `figure` (1 to 4).
    pub fn standard(figure: u32) -> Result<Self> {
        let subfigures = match figure {
            1 => vec![sub(1, Ok(ErrorModel::none()))],
            2 => vec![
                sub(1, ErrorModel::systematic(0.02)),
                sub(2, ErrorModel::systematic(0.03)),
                sub(3, ErrorModel::systematic(0.05)),
                sub(4, ErrorModel::systematic(0.1)),
                sub(4, ErrorModel::systematic(0.33)),
            ],
            3 => [0.01, 0.03, 0.05, 0.1]
                .iter()
                .zip(1..)
                .map(|(&s, panel)| sub(panel, ErrorModel::uniform(s)))
                .collect(),
            4 => vec![
                sub(1, ErrorModel::gaussian(0.01)),
                sub(2, ErrorModel::gaussian(0.03)),
                sub(3, ErrorModel::gaussian(0.05)),
                sub(4, ErrorModel::combined_gaussian(0.33, 0.02)),
            ],
            other => {
                return Err(Error::domain(format!(
                    "unknown figure {other}; expected 1, 2, 3 or 4"
                )))
            }
        };
        Ok(Self {
            figure,
            q: 128,
            r: 4,
            l: 0,
            subfigures,
            trials: 1,
            seed: 0,
            gate_level: false,
        })
    }

    pub fn periodic_spec(&self) -> Result<PeriodicStateSpec> {
        PeriodicStateSpec::new(self.q, self.r, self.l)
    }
}

/// One curve: a relative probability per output index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub panel: u32,
    pub model: Option<ErrorModel>,
    pub points: Vec<(usize, f64)>,
}

impl Series {
    pub fn from_distribution(
        name: impl Into<String>,
        panel: u32,
        model: Option<ErrorModel>,
        dist: &Distribution,
    ) -> Self {
        Self {
            name: name.into(),
            panel,
            model,
            points: dist.probs().iter().copied().enumerate().collect(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|&(_, p)| p).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    pub seed: u64,
    pub parameters: serde_json::Value,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub metadata: Metadata,
    pub series: Vec<Series>,
}

impl Dataset {
    pub fn new(seed: u64, parameters: serde_json::Value, series: Vec<Series>) -> Self {
        Self {
            metadata: Metadata {
                tool_version: TOOL_VERSION.to_string(),
                seed,
                parameters,
                notes: Vec::new(),
            },
            series,
        }
    }
}

/// Short label such as `em1 delta0=0.05` or `em3g delta0=0.33 sigma0=0.02`.
pub fn model_label(model: &ErrorModel) -> String {
    let mut parts = vec![model.mode.name().to_string()];
    if matches!(
        model.mode,
        ErrorMode::Em1 | ErrorMode::Em3Uniform | ErrorMode::Em3Gauss
    ) {
        parts.push(format!("delta0={}", model.delta0));
    }
    if matches!(model.mode, ErrorMode::Em2Uniform | ErrorMode::Em3Uniform) {
        parts.push(format!("smax={}", model.s_max));
    }
    if matches!(model.mode, ErrorMode::Em2Gauss | ErrorMode::Em3Gauss) {
        parts.push(format!("sigma0={}", model.sigma0));
    }
    parts.join(" ")
}

/// Stream id for realization `trial` of subfigure `index`.
fn stream_id(index: usize, trial: u32) -> u64 {
    ((index as u64) << 32) | trial as u64
}

/// Per-term phase errors for one realization of `model`.
pub fn draw_phase_errors(
    spec: &PeriodicStateSpec,
    model: &ErrorModel,
    rng: &mut RngStream,
) -> Vec<f64> {
    (0..spec.terms())
        .map(|_| sample_gate_error(model, rng))
        .collect()
}

/// Model-level distribution for one realization of `model`.
pub fn model_level_distribution(
    spec: &PeriodicStateSpec,
    model: &ErrorModel,
    rng: &mut RngStream,
) -> Result<Distribution> {
    match model.mode {
        ErrorMode::None => Ok(systematic_distribution(spec, 0.0)),
        ErrorMode::Em1 => Ok(systematic_distribution(spec, model.delta0)),
        _ => {
            let phase = draw_phase_errors(spec, model, rng);
            let amp = vec![0.0; spec.terms()];
            double_sum_distribution(spec, &amp, &phase)
        }
    }
}

/// Gate-level distribution: the noisy circuit applied to the periodic state.
pub fn gate_level_distribution(
    spec: &PeriodicStateSpec,
    model: &ErrorModel,
    rng: &mut RngStream,
) -> Result<Distribution> {
    let state = post_measurement_state(spec)?;
    noisy_qft(&state, model, rng).output.to_distribution(false)
}

fn average(dists: &[Distribution]) -> Result<Distribution> {
    let len = dists[0].len();
    let count = dists.len() as f64;
    let probs = (0..len)
        .map(|c| dists.iter().map(|d| d.probs()[c]).sum::<f64>() / count)
        .collect();
    Distribution::new(probs, true)
}

pub fn run_figure(spec: &FigureSpec) -> Result<Dataset> {
    if !(1..=4).contains(&spec.figure) {
        return Err(Error::domain(format!("unknown figure {}", spec.figure)));
    }
    if spec.trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let periodic = spec.periodic_spec()?;
    let mut series = Vec::with_capacity(spec.subfigures.len());
    for (index, subfigure) in spec.subfigures.iter().enumerate() {
        let model = subfigure.model;
        let realizations = if model.mode.is_random() {
            spec.trials
        } else {
            1
        };
        let dists = (0..realizations)
            .map(|trial| {
                let mut rng = RngStream::new(spec.seed, stream_id(index, trial));
                if spec.gate_level {
                    gate_level_distribution(&periodic, &model, &mut rng)
                } else {
                    model_level_distribution(&periodic, &model, &mut rng)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let dist = average(&dists)?;
        let name = format!(
            "{}.{} {}",
            spec.figure,
            subfigure.panel,
            model_label(&model)
        );
        series.push(Series::from_distribution(
            name,
            subfigure.panel,
            Some(model),
            &dist,
        ));
    }

    let parameters = serde_json::json!({
        "figure": spec.figure,
        "q": spec.q,
        "r": spec.r,
        "l": spec.l,
        "trials": spec.trials,
        "gate_level": spec.gate_level,
        "subfigures": spec.subfigures,
    });
    let mut dataset = Dataset::new(spec.seed, parameters, series);
    dataset
        .metadata
        .notes
        .push("values are relative probabilities |f(c)|^2".to_string());
    if spec.figure == 4 {
        dataset
            .metadata
            .notes
            .push("the Gaussian width tau is interpreted as sigma0".to_string());
    }
    if !spec.gate_level && spec.subfigures.iter().any(|s| s.model.mode.is_random()) {
        dataset.metadata.notes.push(
            "random errors are drawn once per support term j (phase only) and summed exactly"
                .to_string(),
        );
    }
    Ok(dataset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_figure() {
        assert!(FigureSpec::standard(5).is_err());
        let mut spec = FigureSpec::standard(1).unwrap();
        spec.figure = 0;
        assert!(run_figure(&spec).is_err());
    }

    #[test]
    fn figure_one_peaks() {
        let data = run_figure(&FigureSpec::standard(1).unwrap()).unwrap();
        assert_eq!(data.series.len(), 1);
        let s = &data.series[0];
        assert_eq!(s.points.len(), 128);
        for &(c, p) in &s.points {
            if c % 32 == 0 {
                assert!((p - 0.25).abs() < 1e-10);
            } else {
                assert!(p <= 1e-12);
            }
        }
    }

    #[test]
    fn figure_two_layout() {
        let data = run_figure(&FigureSpec::standard(2).unwrap()).unwrap();
        let panels: Vec<u32> = data.series.iter().map(|s| s.panel).collect();
        assert_eq!(panels, vec![1, 2, 3, 4, 4]);
        let s = &data.series[2];
        let v = s.values();
        let window_max = (120..128).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
        assert_eq!(window_max, 127);
    }

    #[test]
    fn figure_four_notes_tau() {
        let data = run_figure(&FigureSpec::standard(4).unwrap()).unwrap();
        assert!(data.metadata.notes.iter().any(|n| n.contains("sigma0")));
        assert_eq!(data.series[3].model.unwrap().mode, ErrorMode::Em3Gauss);
    }
}
