//! Lag windows and moment-order grids.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer lag range `[tau_min, tau_max]` used for one GHE regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WindowRepr", into = "WindowRepr")]
pub struct LagWindow {
    tau_min: usize,
    tau_max: usize,
}

/// Accepts `{tau_min, tau_max}` or `"a:b"`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WindowRepr {
    Table { tau_min: usize, tau_max: usize },
    Text(String),
}

impl TryFrom<WindowRepr> for LagWindow {
    type Error = Error;
    fn try_from(r: WindowRepr) -> Result<Self> {
        match r {
            WindowRepr::Table { tau_min, tau_max } => LagWindow::new(tau_min, tau_max),
            WindowRepr::Text(s) => s.parse(),
        }
    }
}

impl From<LagWindow> for WindowRepr {
    fn from(w: LagWindow) -> Self {
        WindowRepr::Table {
            tau_min: w.tau_min,
            tau_max: w.tau_max,
        }
    }
}

impl LagWindow {
    /// The small-lag window `[1, 19]`.
    pub const SHORT: LagWindow = LagWindow {
        tau_min: 1,
        tau_max: 19,
    };
    /// The large-lag window `[30, 250]`.
    pub const LONG: LagWindow = LagWindow {
        tau_min: 30,
        tau_max: 250,
    };

    pub fn new(tau_min: usize, tau_max: usize) -> Result<Self> {
        if tau_min < 1 || tau_min >= tau_max {
            return Err(Error::domain(format!(
                "lag window needs 1 <= tau_min < tau_max, got [{tau_min}, {tau_max}]"
            )));
        }
        Ok(LagWindow { tau_min, tau_max })
    }

    pub fn tau_min(&self) -> usize {
        self.tau_min
    }

    pub fn tau_max(&self) -> usize {
        self.tau_max
    }

    pub fn taus(&self) -> impl Iterator<Item = usize> + Clone {
        self.tau_min..=self.tau_max
    }

    pub fn len(&self) -> usize {
        self.tau_max - self.tau_min + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Checks `tau_max < len / 4`.
    pub fn check_length(&self, len: usize) -> Result<()> {
        if self.tau_max.saturating_mul(4) >= len {
            return Err(Error::domain(format!(
                "window {self} needs a series longer than {} points, got {len}",
                4 * self.tau_max
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LagWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.tau_min, self.tau_max)
    }
}

/// Parses `a:b`.
impl FromStr for LagWindow {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::domain(format!("expected tau_min:tau_max, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::domain(format!("bad lag {t:?}: {e}")))
        };
        LagWindow::new(parse(a)?, parse(b)?)
    }
}

/// Strictly increasing list of positive moment orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct QGrid {
    qs: Vec<f64>,
}

/// Accepts a list of orders or `"start:step:stop"`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GridRepr {
    List(Vec<f64>),
    Text(String),
}

impl TryFrom<GridRepr> for QGrid {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        match r {
            GridRepr::List(qs) => QGrid::new(qs),
            GridRepr::Text(s) => s.parse(),
        }
    }
}

impl From<QGrid> for GridRepr {
    fn from(g: QGrid) -> Self {
        GridRepr::List(g.qs)
    }
}

impl Default for QGrid {
    /// `{0.1, 0.2, ..., 1.0}`.
    fn default() -> Self {
        QGrid {
            qs: (1..=10).map(|k| k as f64 / 10.0).collect(),
        }
    }
}

impl QGrid {
    pub fn new(qs: Vec<f64>) -> Result<Self> {
        if qs.is_empty() {
            return Err(Error::domain("empty q grid"));
        }
        if qs.iter().any(|q| !(q.is_finite() && *q > 0.0)) {
            return Err(Error::domain("q grid values must be positive and finite"));
        }
        if qs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("q grid must be strictly increasing"));
        }
        Ok(QGrid { qs })
    }

    /// Grid `start, start + step, ...` up to `stop` (inclusive, with rounding slack).
    pub fn range(start: f64, step: f64, stop: f64) -> Result<Self> {
        if step.is_nan() || step <= 0.0 || stop.is_nan() || stop < start {
            return Err(Error::domain(format!("bad q range {start}:{step}:{stop}")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        let qs = (0..=n)
            .map(|k| {
                let q = start + k as f64 * step;
                // snap to 12 decimals so that 0.1:0.1:1 reproduces the literal grid
                (q * 1e12).round() / 1e12
            })
            .collect();
        QGrid::new(qs)
    }

    pub fn qs(&self) -> &[f64] {
        &self.qs
    }

    pub fn len(&self) -> usize {
        self.qs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qs.is_empty()
    }

    pub fn max(&self) -> f64 {
        *self.qs.last().expect("non-empty grid")
    }

    /// Index of `q` in the grid, within 1e-9.
    pub fn position(&self, q: f64) -> Option<usize> {
        self.qs.iter().position(|x| (x - q).abs() < 1e-9)
    }

    /// If every grid value is `k * q0` for `k = 1..=len`, returns `q0`.
    pub(crate) fn unit_multiple(&self) -> Option<f64> {
        let q0 = self.qs[0];
        self.qs
            .iter()
            .enumerate()
            .all(|(k, q)| (q - (k + 1) as f64 * q0).abs() <= 1e-12 * q.max(1.0))
            .then_some(q0)
    }
}

/// Parses `start:step:stop` or a comma-separated list.
impl FromStr for QGrid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let nums = |sep: char| -> Result<Vec<f64>> {
            s.split(sep)
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::domain(format!("bad q value {t:?}: {e}")))
                })
                .collect()
        };
        if s.contains(':') {
            match nums(':')?.as_slice() {
                [a, b, c] => QGrid::range(*a, *b, *c),
                _ => Err(Error::domain(format!(
                    "expected start:step:stop, got {s:?}"
                ))),
            }
        } else {
            QGrid::new(nums(',')?)
        }
    }
}
