//! Static SVG stem charts, one panel per subfigure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::figure::{Dataset, Series};

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Debug, Clone)]
pub struct SvgOptions {
    pub width: u32,
    pub panel_height: u32,
    pub title: Option<String>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            width: 800,
            panel_height: 240,
            title: None,
        }
    }
}

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 45.0;
/// Stems shorter than this many pixels are not drawn.
const MIN_STEM_PX: f64 = 0.5;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Panel<'a> {
    index: u32,
    series: Vec<&'a Series>,
}

fn panels(dataset: &Dataset) -> Vec<Panel<'_>> {
    let mut grouped: BTreeMap<u32, Vec<&Series>> = BTreeMap::new();
    for s in &dataset.series {
        grouped.entry(s.panel).or_default().push(s);
    }
    if grouped.is_empty() {
        return vec![Panel {
            index: 1,
            series: Vec::new(),
        }];
    }
    grouped
        .into_iter()
        .map(|(index, series)| Panel { index, series })
        .collect()
}

fn draw_panel(out: &mut String, panel: &Panel<'_>, top: f64, opts: &SvgOptions) {
    let width = opts.width as f64;
    let height = opts.panel_height as f64;
    let x0 = MARGIN_LEFT;
    let x1 = width - MARGIN_RIGHT;
    let y0 = top + height - MARGIN_BOTTOM;
    let y1 = top + MARGIN_TOP;

    let x_max = panel
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|&(c, _)| c))
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let y_max = panel
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|&(_, p)| p))
        .fold(0.0, f64::max);
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
    let sx = |c: f64| x0 + (x1 - x0) * c / x_max;
    let sy = |p: f64| y0 - (y0 - y1) * p / y_max;

    let _ = writeln!(out, r#"<g class="panel" data-panel="{}">"#, panel.index);
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#
    );
    for k in 0..=4 {
        let c = x_max * k as f64 / 4.0;
        let x = sx(c);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            y0 + 4.0,
            y0 + 16.0,
            c.round()
        );
        let p = y_max * k as f64 / 4.0;
        let y = sy(p);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{p:.3}</text>"#,
            x0 - 4.0,
            x0 - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text class="xlabel" x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">c</text>"#,
        (x0 + x1) / 2.0,
        y0 + 34.0
    );
    let _ = writeln!(
        out,
        r#"<text class="ylabel" x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">P_c</text>"#,
        x0 - 52.0,
        (y0 + y1) / 2.0,
        x0 - 52.0,
        (y0 + y1) / 2.0
    );

    for (i, series) in panel.series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<g class="series" stroke="{colour}" fill="{colour}"><title>{}</title>"#,
            escape(&series.name)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" stroke="none">{}</text>"#,
            x1 - 200.0,
            y1 + 14.0 * i as f64,
            escape(&series.name)
        );
        if !series.points.is_empty() {
            let path: Vec<String> = series
                .points
                .iter()
                .map(|&(c, p)| format!("{:.2},{:.2}", sx(c as f64), sy(p)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke-width="0.6" stroke-opacity="0.5" points="{}"/>"#,
                path.join(" ")
            );
        }
        for &(c, p) in &series.points {
            let (x, y) = (sx(c as f64), sy(p));
            if y0 - y >= MIN_STEM_PX {
                let _ = writeln!(
                    out,
                    r#"<line class="stem" x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y:.2}" stroke-width="1.5"/>"#
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</g>");
}

/// Renders the dataset as a standalone SVG document.
pub fn render_svg(dataset: &Dataset, opts: &SvgOptions) -> String {
    let panels = panels(dataset);
    let total_height = opts.panel_height as usize * panels.len() + 30;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{total_height}" viewBox="0 0 {} {total_height}">"#,
        opts.width, opts.width
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(title) = &opts.title {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="20" font-size="15" text-anchor="middle">{}</text>"#,
            opts.width / 2,
            escape(title)
        );
    }
    for (i, panel) in panels.iter().enumerate() {
        let top = 30.0 + (i as f64) * opts.panel_height as f64;
        draw_panel(&mut out, panel, top, opts);
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_svg(dataset: &Dataset, path: &Path, opts: &SvgOptions) -> Result<()> {
    fs::write(path, render_svg(dataset, opts)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::figure::{run_figure, FigureSpec};

    #[test]
    fn figure_one_has_four_stems() {
        let data = run_figure(&FigureSpec::standard(1).unwrap()).unwrap();
        let svg = render_svg(&data, &SvgOptions::default());
        assert_eq!(svg.matches(r#"class="stem""#).count(), 4);
        assert!(svg.contains(">c</text>"));
        assert!(svg.contains(">P_c</text>"));
    }

    #[test]
    fn empty_dataset_draws_axes() {
        let data = Dataset::new(0, serde_json::Value::Null, Vec::new());
        let svg = render_svg(&data, &SvgOptions::default());
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches(r#"class="axis""#).count(), 2);
        assert_eq!(svg.matches(r#"class="stem""#).count(), 0);
    }

    #[test]
    fn deterministic() {
        let data = run_figure(&FigureSpec::standard(3).unwrap()).unwrap();
        let a = render_svg(&data, &SvgOptions::default());
        let b = render_svg(&data, &SvgOptions::default());
        assert_eq!(a, b);
    }

    #[test]
    fn escapes_names() {
        assert_eq!(escape("a<b & \"c\">"), "a&lt;b &amp; &quot;c&quot;&gt;");
    }
}
