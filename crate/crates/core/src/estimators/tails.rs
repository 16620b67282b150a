//! Continuous power-law tail fit: MLE exponent for each candidate cutoff,
//! with the cutoff chosen by minimum Kolmogorov-Smirnov distance.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Series;

/// Minimum number of points above the cutoff.
pub const MIN_TAIL: usize = 50;
/// Most cutoffs evaluated; larger candidate sets are thinned evenly.
pub const MAX_CANDIDATES: usize = 2000;
const LOWER_QUANTILE: f64 = 0.50;
const UPPER_QUANTILE: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailSide {
    Left,
    Right,
}

impl fmt::Display for TailSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailSide::Left => "left",
            TailSide::Right => "right",
        })
    }
}

impl FromStr for TailSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(TailSide::Left),
            "right" => Ok(TailSide::Right),
            _ => Err(Error::domain(format!("unknown tail side {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub side: TailSide,
    /// Tail exponent of the CCDF, `P(X > x) ~ x^-alpha` (one less than the
    /// density exponent).
    pub alpha: f64,
    pub xmin: f64,
    pub ks_distance: f64,
    pub stderr_alpha: f64,
    /// Points at or above `xmin`.
    pub n_tail: usize,
    /// Points on the requested side.
    pub n_side: usize,
}

/// Positive values (right) or negated negative values (left), sorted ascending.
pub fn side_values(values: &[f64], side: TailSide) -> Vec<f64> {
    let mut v: Vec<f64> = match side {
        TailSide::Right => values.iter().copied().filter(|x| *x > 0.0).collect(),
        TailSide::Left => values.iter().filter(|x| **x < 0.0).map(|x| -x).collect(),
    };
    v.sort_by(f64::total_cmp);
    v
}

/// CCDF exponent and KS distance of the tail `x[start..]` (sorted ascending).
/// The density MLE is `1 + m / sum ln(x / xmin)`; the CCDF exponent drops the 1.
fn fit_from(x: &[f64], logs: &[f64], suffix_log: &[f64], start: usize) -> (f64, f64) {
    let m = x.len() - start;
    let ln_xmin = logs[start];
    let s = suffix_log[start] - m as f64 * ln_xmin;
    let alpha = m as f64 / s;
    let mf = m as f64;
    let mut d: f64 = 0.0;
    for (k, lx) in logs[start..].iter().enumerate() {
        let model_cdf = 1.0 - (-alpha * (lx - ln_xmin)).exp();
        let lo = k as f64 / mf;
        let hi = (k + 1) as f64 / mf;
        d = d.max((hi - model_cdf).abs()).max((model_cdf - lo).abs());
    }
    (alpha, d)
}

/// Fits a power law to one tail of the series.
pub fn fit_tail(series: &Series, side: TailSide) -> Result<TailFit> {
    let x = side_values(series.values(), side);
    let n = x.len();
    if n < MIN_TAIL {
        return Err(Error::estimation(format!(
            "{n} values on the {side} side, need at least {MIN_TAIL}"
        )));
    }
    let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let mut suffix_log = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix_log[i] = suffix_log[i + 1] + logs[i];
    }

    let lo = x[((n - 1) as f64 * LOWER_QUANTILE).floor() as usize];
    let hi = x[((n - 1) as f64 * UPPER_QUANTILE).floor() as usize];
    // first index of each distinct value in [lo, hi] leaving >= MIN_TAIL points
    let mut starts: Vec<usize> = (0..n)
        .filter(|&i| (i == 0 || x[i] != x[i - 1]) && x[i] >= lo && x[i] <= hi && n - i >= MIN_TAIL)
        .collect();
    if starts.is_empty() {
        return Err(Error::estimation(format!(
            "no cutoff on the {side} side leaves {MIN_TAIL} tail points"
        )));
    }
    if starts.len() > MAX_CANDIDATES {
        let k = starts.len();
        starts = (0..MAX_CANDIDATES)
            .map(|j| starts[j * (k - 1) / (MAX_CANDIDATES - 1)])
            .collect();
        starts.dedup();
    }

    let mut best: Option<(usize, f64, f64)> = None;
    for &start in &starts {
        let (alpha, d) = fit_from(&x, &logs, &suffix_log, start);
        if !alpha.is_finite() {
            continue;
        }
        if best.is_none_or(|(_, _, bd)| d < bd) {
            best = Some((start, alpha, d));
        }
    }
    let (start, alpha, ks) =
        best.ok_or_else(|| Error::estimation(format!("degenerate {side} tail")))?;
    let m = n - start;
    Ok(TailFit {
        side,
        alpha,
        xmin: x[start],
        ks_distance: ks,
        stderr_alpha: alpha / (m as f64).sqrt(),
        n_tail: m,
        n_side: n,
    })
}

impl TailFit {
    /// Exponent of the density, `alpha + 1`.
    pub fn density_exponent(&self) -> f64 {
        self.alpha + 1.0
    }
}

/// One row of a tail CCDF curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CcdfPoint {
    pub x: f64,
    /// Fraction of side values `>= x`.
    pub ccdf: f64,
    /// Fitted power law, scaled to the tail share; `None` below `xmin`.
    pub fitted: Option<f64>,
}

/// Empirical CCDF of one side with the fitted power law overlaid.
pub fn tail_ccdf(series: &Series, fit: &TailFit) -> Vec<CcdfPoint> {
    let x = side_values(series.values(), fit.side);
    let n = x.len() as f64;
    let share = fit.n_tail as f64 / n;
    let mut out: Vec<CcdfPoint> = Vec::with_capacity(x.len());
    for (i, v) in x.iter().enumerate() {
        if i > 0 && x[i - 1] == *v {
            continue;
        }
        out.push(CcdfPoint {
            x: *v,
            ccdf: (x.len() - i) as f64 / n,
            fitted: (*v >= fit.xmin).then(|| share * (v / fit.xmin).powf(-fit.alpha)),
        });
    }
    out
}
