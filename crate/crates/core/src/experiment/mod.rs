//! Figure reproduction, peak analysis, threshold sweeps and the file
//! formats they are written in.

pub mod config;
pub mod figure;
pub mod output;
pub mod peaks;
pub mod svg;
pub mod threshold;

pub use figure::{run_figure, Dataset, FigureSpec, Series, SubfigureSpec};
pub use output::{emit_dataset, parse_dataset_csv, parse_dataset_json, OutputFormat};
pub use peaks::{detect_peaks, PeakReport};
pub use svg::{emit_svg, render_svg, SvgOptions};
pub use threshold::{parse_grid, threshold_sweep, ThresholdPoint, ThresholdReport};

/// Version string recorded in emitted metadata.
pub const TOOL_VERSION: &str = concat!("shor-noise ", env!("CARGO_PKG_VERSION"));
