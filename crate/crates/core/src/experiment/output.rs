//! CSV and JSON serialization.
//!
//! Dataset CSV has the header `c,p,series`, one row per point, LF line
//! endings, and floats in shortest round-trip form. JSON carries the same
//! points plus run metadata.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::figure::Dataset;
use super::threshold::ThresholdReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// `.json` selects JSON; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::domain(format!("unknown output format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub c: usize,
    pub p: f64,
    pub series: String,
}

pub fn dataset_rows(dataset: &Dataset) -> Vec<CsvRow> {
    dataset
        .series
        .iter()
        .flat_map(|s| {
            s.points.iter().map(|&(c, p)| CsvRow {
                c,
                p,
                series: s.name.clone(),
            })
        })
        .collect()
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("in-memory writer does not fail");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

pub fn render_csv(dataset: &Dataset) -> String {
    let mut w = csv_writer();
    w.write_record(["c", "p", "series"])
        .expect("in-memory write");
    for row in dataset_rows(dataset) {
        w.write_record([row.c.to_string(), row.p.to_string(), row.series])
            .expect("in-memory write");
    }
    finish(w)
}

pub fn render_json(dataset: &Dataset) -> String {
    let mut text = serde_json::to_string_pretty(dataset).expect("dataset serializes");
    text.push('\n');
    text
}

pub fn parse_dataset_csv(text: &str) -> Result<Vec<CsvRow>> {
    let parse_err = |message: String| Error::Parse {
        path: "<csv>".into(),
        message,
    };
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| parse_err(e.to_string()))?;
    if headers != vec!["c", "p", "series"] {
        return Err(parse_err(format!("unexpected header {headers:?}")));
    }
    reader
        .deserialize::<CsvRow>()
        .map(|row| row.map_err(|e| parse_err(e.to_string())))
        .collect()
}

pub fn parse_dataset_json(text: &str) -> Result<Dataset> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: "<json>".into(),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn emit_dataset(dataset: &Dataset, format: OutputFormat, path: &Path) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => render_csv(dataset),
        OutputFormat::Json => render_json(dataset),
    };
    write_file(path, &text)
}

pub fn render_threshold_csv(report: &ThresholdReport) -> String {
    let mut w = csv_writer();
    w.write_record([
        "magnitude",
        "success",
        "ci_low",
        "ci_high",
        "successes",
        "trials",
    ])
    .expect("in-memory write");
    for p in &report.points {
        let e = &p.estimate;
        w.write_record([
            p.magnitude.to_string(),
            e.p.to_string(),
            e.ci_low.to_string(),
            e.ci_high.to_string(),
            e.successes.to_string(),
            e.trials.to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

#[derive(Serialize)]
struct ThresholdDocument<'a> {
    tool_version: &'a str,
    #[serde(flatten)]
    report: &'a ThresholdReport,
}

pub fn render_threshold_json(report: &ThresholdReport) -> String {
    let doc = ThresholdDocument {
        tool_version: super::TOOL_VERSION,
        report,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}

pub fn emit_threshold(report: &ThresholdReport, format: OutputFormat, path: &Path) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => render_threshold_csv(report),
        OutputFormat::Json => render_threshold_json(report),
    };
    write_file(path, &text)
}
