//! Report envelope shared by every experiment, and its CSV / JSON writers.
//!
//! JSON reports follow `fixtures/report.schema.v1.json`; CSV column sets per
//! experiment are listed in `fixtures/csv_columns.v1.json`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// Shipped JSON schema for [`Report`].
pub const REPORT_SCHEMA: &str = include_str!("../../fixtures/report.schema.v1.json");
/// Shipped CSV column sets, keyed by experiment name.
pub const CSV_COLUMNS: &str = include_str!("../../fixtures/csv_columns.v1.json");

/// Identifier of the build that produced a report. `MIXER_BUILD_ID` set at
/// compile time (e.g. from `git describe`) takes precedence.
pub fn build_id() -> String {
    option_env!("MIXER_BUILD_ID")
        .map(str::to_owned)
        .unwrap_or_else(|| format!("mixer-core-v{}", env!("CARGO_PKG_VERSION")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Too little data to decide; never counts as a failure.
    Inconclusive,
}

/// One assertion made by an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    /// Seed, trajectory index or canonical key needed to reproduce a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: if passed {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: detail.into(),
            replay: None,
        }
    }

    pub fn inconclusive(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: CheckStatus::Inconclusive,
            detail: detail.into(),
            replay: None,
        }
    }

    pub fn with_replay(mut self, replay: impl Into<String>) -> Self {
        self.replay = Some(replay.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

/// Serialisable outcome of one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub experiment: String,
    pub build_id: String,
    /// Seconds since the Unix epoch; the only field allowed to differ
    /// between two runs with the same configuration.
    pub generated_at: u64,
    pub config: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Map<String, Value>>,
    pub fitted: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl Report {
    pub fn new(experiment: &str, config: Value, columns: &[&str]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_owned(),
            build_id: build_id(),
            generated_at: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            fitted: BTreeMap::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
            passed: true,
        }
    }

    /// Appends a row; `values` must follow `columns`.
    pub fn push_row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len(), "row width");
        let row = self.columns.iter().cloned().zip(values).collect();
        self.rows.push(row);
    }

    pub fn check(&mut self, check: Check) {
        if check.failed() {
            self.passed = false;
        }
        self.checks.push(check);
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn write_json<W: Write>(&self, w: W) -> io::Result<()> {
        let mut w = w;
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")
    }

    /// RFC 4180 CSV: header row then one record per data row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(
                self.columns
                    .iter()
                    .map(|c| cell_text(row.get(c).unwrap_or(&Value::Null))),
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!(
                "unknown output format `{other}` (expected csv or json)"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("cannot write report to {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot write CSV to {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

/// Writes the report in the requested format to `path`, or to stdout when
/// `path` is `None`.
pub fn emit_report(
    report: &Report,
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), EmitError> {
    let label = path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            EmitError::Io {
                path: label.clone(),
                source,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        OutputFormat::Json => report.write_json(sink).map_err(|source| EmitError::Io {
            path: label,
            source,
        }),
        OutputFormat::Csv => report.write_csv(sink).map_err(|source| EmitError::Csv {
            path: label,
            source,
        }),
    }
}
