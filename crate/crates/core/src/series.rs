//! The [`Series`] container and the increment/moment arithmetic built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a series stores increments (returns) or levels (a path).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Increments,
    Levels,
}

/// Where a synthetic series came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedProvenance {
    pub generator: String,
    pub master_seed: u64,
    pub realization: u64,
}

/// How increments at lag `tau` are sampled from a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IncrementMode {
    /// Every start index: `N - tau` increments.
    #[default]
    Overlapping,
    /// Start indices `0, tau, 2 tau, ...`: `floor((N - 1) / tau)` increments.
    Disjoint,
}

/// An ordered sequence of finite values with metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    values: Vec<f64>,
    kind: SeriesKind,
    pub label: String,
    pub provenance: Option<SeedProvenance>,
}

impl Series {
    /// Builds a series, rejecting non-finite values.
    pub fn new(values: Vec<f64>, kind: SeriesKind) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "non-finite value {} at index {i}",
                values[i]
            )));
        }
        Ok(Series {
            values,
            kind,
            label: String::new(),
            provenance: None,
        })
    }

    pub fn increments(values: Vec<f64>) -> Result<Self> {
        Self::new(values, SeriesKind::Increments)
    }

    pub fn levels(values: Vec<f64>) -> Result<Self> {
        Self::new(values, SeriesKind::Levels)
    }

    /// Constructor for values already known to be finite.
    pub(crate) fn from_finite(values: Vec<f64>, kind: SeriesKind) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Series {
            values,
            kind,
            label: String::new(),
            provenance: None,
        }
    }

    fn with_kind(mut self, kind: SeriesKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_provenance(mut self, provenance: SeedProvenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Replaces the values, keeping label and kind. Provenance is kept too.
    pub(crate) fn map_values(&self, values: Vec<f64>) -> Self {
        Series {
            values,
            kind: self.kind,
            label: self.label.clone(),
            provenance: self.provenance.clone(),
        }
    }

    /// Cumulative path of an increment series, starting at 0 (length `N + 1`).
    /// A levels series is returned unchanged.
    pub fn to_levels(&self) -> Series {
        match self.kind {
            SeriesKind::Levels => self.clone(),
            SeriesKind::Increments => Series {
                values: cumsum(&self.values),
                kind: SeriesKind::Levels,
                label: self.label.clone(),
                provenance: self.provenance.clone(),
            },
        }
    }

    /// Lag-1 increments of a levels series; an increment series is returned unchanged.
    pub fn to_increments(&self) -> Result<Series> {
        match self.kind {
            SeriesKind::Increments => Ok(self.clone()),
            SeriesKind::Levels => increments(self, 1),
        }
    }
}

/// Running sum with a leading zero.
pub fn cumsum(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len() + 1);
    let mut acc = 0.0;
    out.push(acc);
    for v in values {
        acc += v;
        out.push(acc);
    }
    out
}

/// Overlapping lag-`tau` increments `x[i + tau] - x[i]` of a levels series.
pub fn increments(series: &Series, tau: usize) -> Result<Series> {
    increments_with(series, tau, IncrementMode::Overlapping)
}

pub fn increments_with(series: &Series, tau: usize, mode: IncrementMode) -> Result<Series> {
    if series.kind != SeriesKind::Levels {
        return Err(Error::domain("increments require a levels series"));
    }
    let x = &series.values;
    if tau == 0 || tau >= x.len() {
        return Err(Error::domain(format!(
            "lag {tau} out of range for a series of length {}",
            x.len()
        )));
    }
    let step = match mode {
        IncrementMode::Overlapping => 1,
        IncrementMode::Disjoint => tau,
    };
    let values = (0..x.len() - tau)
        .step_by(step)
        .map(|i| x[i + tau] - x[i])
        .collect();
    Ok(series.map_values(values).with_kind(SeriesKind::Increments))
}

/// Sample q-th absolute moment `(1/M) sum |x_i|^q`.
///
/// Terms are summed in ascending order of magnitude, so the result depends
/// only on the multiset of values.
pub fn abs_moment(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("absolute moment of an empty sample"));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(format!(
            "moment order must be positive, got {q}"
        )));
    }
    let mut mags: Vec<f64> = values.iter().map(|x| x.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let sum: f64 = mags.iter().map(|x| x.powf(q)).sum();
    Ok(sum / values.len() as f64)
}
