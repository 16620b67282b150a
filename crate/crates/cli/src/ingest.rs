//! CSV ingestion: one numeric column becomes an increment series.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;
use mscale::{Series, SeriesKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Series shorter than this trigger a warning.
pub const MIN_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// Prices to `ln p[t+1] - ln p[t]`.
    #[default]
    LogReturns,
    /// Values are already increments.
    RawIncrements,
    /// Values are a level path; its increments are taken.
    Levels,
}

impl FromStr for Transform {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "log_returns" => Ok(Transform::LogReturns),
            "raw_increments" => Ok(Transform::RawIncrements),
            "levels" => Ok(Transform::Levels),
            _ => Err(CliError::usage(format!(
                "unknown transform {s:?} (expected log_returns, raw_increments or levels)"
            ))),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::LogReturns => "log_returns",
            Transform::RawIncrements => "raw_increments",
            Transform::Levels => "levels",
        })
    }
}

/// A column by zero-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl Default for ColumnSelector {
    fn default() -> Self {
        ColumnSelector::Index(0)
    }
}

impl FromStr for ColumnSelector {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Drop unusable rows and report how many.
    #[default]
    Drop,
    /// Fail on the first unusable row.
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub column: ColumnSelector,
    /// Rows are sorted by this column (as text) before use.
    pub date_column: Option<ColumnSelector>,
    /// `None` uses the file's `# kind=` comment, falling back to log-returns.
    pub transform: Option<Transform>,
    pub missing: MissingPolicy,
}

impl IngestSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        IngestSpec {
            path: path.into(),
            column: ColumnSelector::default(),
            date_column: None,
            transform: None,
            missing: MissingPolicy::default(),
        }
    }

    pub fn with_transform(mut self, t: Transform) -> Self {
        self.transform = Some(t);
        self
    }

    pub fn with_column(mut self, c: ColumnSelector) -> Self {
        self.column = c;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub series: Series,
    pub transform: Transform,
    /// Rows dropped as missing, unparseable or (for prices) non-positive.
    pub dropped: usize,
}

pub fn ingest(spec: &IngestSpec) -> CliResult<Ingested> {
    let text = std::fs::read_to_string(&spec.path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", spec.path.display())))?;
    let mut out = ingest_str(&text, spec)?;
    out.series.label = spec.path.display().to_string();
    Ok(out)
}

fn kind_hint(text: &str) -> Option<Transform> {
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("kind="))
        .and_then(|k| match k.trim() {
            "increments" => Some(Transform::RawIncrements),
            "levels" => Some(Transform::Levels),
            _ => None,
        })
}

fn resolve(sel: &ColumnSelector, header: Option<&csv::StringRecord>) -> CliResult<usize> {
    match sel {
        ColumnSelector::Index(i) => Ok(*i),
        ColumnSelector::Name(name) => header
            .and_then(|h| h.iter().position(|c| c.trim() == name))
            .ok_or_else(|| CliError::data(format!("no column named {name:?}"))),
    }
}

/// Parses CSV text; `spec.path` is used only in messages.
pub fn ingest_str(text: &str, spec: &IngestSpec) -> CliResult<Ingested> {
    let transform = spec
        .transform
        .or_else(|| kind_hint(text))
        .unwrap_or_default();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader
        .records()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::data(format!("{}: {e}", spec.path.display())))?;
    if records.is_empty() {
        return Err(CliError::data(format!(
            "{} has no rows",
            spec.path.display()
        )));
    }

    // a first row whose value cell is not numeric is a header
    let probe = match &spec.column {
        ColumnSelector::Index(i) => records[0].get(*i).map(|c| c.parse::<f64>().is_err()),
        ColumnSelector::Name(_) => Some(true),
    };
    let header = if probe.unwrap_or(false) {
        Some(records.remove(0))
    } else {
        None
    };
    let col = resolve(&spec.column, header.as_ref())?;
    if let Some(date) = &spec.date_column {
        let d = resolve(date, header.as_ref())?;
        records.sort_by(|a, b| a.get(d).unwrap_or("").cmp(b.get(d).unwrap_or("")));
    }

    let positive = transform != Transform::RawIncrements;
    let mut values = Vec::with_capacity(records.len());
    let mut dropped = 0;
    for (row, rec) in records.iter().enumerate() {
        let v = rec
            .get(col)
            .and_then(|c| c.parse::<f64>().ok())
            .filter(|v| v.is_finite() && (!positive || *v > 0.0));
        match (v, spec.missing) {
            (Some(v), _) => values.push(v),
            (None, MissingPolicy::Drop) => dropped += 1,
            (None, MissingPolicy::Fail) => {
                return Err(CliError::data(format!(
                    "{}: unusable value {:?} in data row {}",
                    spec.path.display(),
                    rec.get(col).unwrap_or(""),
                    row + 1
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::data(format!(
            "{}: column has no usable values",
            spec.path.display()
        )));
    }
    if dropped > 0 {
        warn!("{}: dropped {dropped} unusable rows", spec.path.display());
    }

    let increments: Vec<f64> = match transform {
        Transform::RawIncrements => values,
        Transform::LogReturns => values.windows(2).map(|w| w[1].ln() - w[0].ln()).collect(),
        Transform::Levels => values.windows(2).map(|w| w[1] - w[0]).collect(),
    };
    if increments.is_empty() {
        return Err(CliError::data(format!(
            "{}: need at least two values to form increments",
            spec.path.display()
        )));
    }
    if increments.len() < MIN_POINTS {
        warn!(
            "{}: only {} points (fewer than {MIN_POINTS})",
            spec.path.display(),
            increments.len()
        );
    }
    let series = Series::new(increments, SeriesKind::Increments)?;
    Ok(Ingested {
        series,
        transform,
        dropped,
    })
}

/// Writes a single-column series CSV with a `# kind=` comment. Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_series<W: std::io::Write>(
    mut w: W,
    series: &Series,
    comments: &[String],
) -> CliResult<()> {
    let kind = match series.kind() {
        SeriesKind::Increments => "increments",
        SeriesKind::Levels => "levels",
    };
    writeln!(w, "# kind={kind}")?;
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "value")?;
    for v in series.values() {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_series_file(path: &Path, series: &Series, comments: &[String]) -> CliResult<()> {
    let f = std::fs::File::create(path)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    write_series(std::io::BufWriter::new(f), series, comments)
}
