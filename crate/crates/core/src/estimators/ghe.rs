//! Generalized Hurst Exponent: for every q, one unweighted OLS fit of
//! `ln E|X(t+tau) - X(t)|^q` against `ln tau` over the whole lag window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{LagWindow, QGrid};
use crate::ols::fit_line;
use crate::series::{cumsum, IncrementMode, Series, SeriesKind};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GheConfig {
    #[serde(default)]
    pub increments: IncrementMode,
}

/// Regression output for one moment order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaPoint {
    pub q: f64,
    pub zeta_hat: f64,
    pub stderr: f64,
    pub r2: f64,
    /// Fitted `ln K(q)`.
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingResult {
    pub window: LagWindow,
    pub grid: QGrid,
    pub points: Vec<ZetaPoint>,
    /// `log_moments[i][j]`: ln moment of order `grid[i]` at lag `window.tau_min + j`.
    pub log_moments: Vec<Vec<f64>>,
}

impl ScalingResult {
    pub fn zetas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.zeta_hat).collect()
    }

    /// `zeta_hat(q) / q` for a grid order `q`.
    pub fn hurst(&self, q: f64) -> Option<f64> {
        self.grid.position(q).map(|i| self.points[i].zeta_hat / q)
    }
}

pub fn estimate_ghe(series: &Series, window: LagWindow, grid: &QGrid) -> Result<ScalingResult> {
    estimate_ghe_with(series, window, grid, GheConfig::default())
}

pub fn estimate_ghe_with(
    series: &Series,
    window: LagWindow,
    grid: &QGrid,
    config: GheConfig,
) -> Result<ScalingResult> {
    let owned;
    let path: &[f64] = match series.kind() {
        SeriesKind::Increments => {
            owned = cumsum(series.values());
            &owned
        }
        SeriesKind::Levels => series.values(),
    };
    estimate_on_path(path, window, grid, config)
}

/// Estimates several windows sharing one cumulative path.
pub fn estimate_ghe_windows(
    series: &Series,
    windows: &[LagWindow],
    grid: &QGrid,
    config: GheConfig,
) -> Result<Vec<ScalingResult>> {
    let levels = series.to_levels();
    windows
        .iter()
        .map(|w| estimate_on_path(levels.values(), *w, grid, config))
        .collect()
}

fn estimate_on_path(
    path: &[f64],
    window: LagWindow,
    grid: &QGrid,
    config: GheConfig,
) -> Result<ScalingResult> {
    window.check_length(path.len())?;
    let qs = grid.qs();
    let unit = grid.unit_multiple();
    let mut log_moments = vec![Vec::with_capacity(window.len()); qs.len()];
    let mut sums = vec![0.0; qs.len()];
    for tau in window.taus() {
        let step = match config.increments {
            IncrementMode::Overlapping => 1,
            IncrementMode::Disjoint => tau,
        };
        let count = lag_moment_sums(path, tau, step, qs, unit, &mut sums);
        for (i, s) in sums.iter().enumerate() {
            if s.is_nan() || *s <= 0.0 {
                return Err(Error::estimation(format!(
                    "zero moment of order {} at lag {tau}",
                    qs[i]
                )));
            }
            log_moments[i].push((s / count as f64).ln());
        }
    }

    let log_tau: Vec<f64> = window.taus().map(|t| (t as f64).ln()).collect();
    let points = qs
        .iter()
        .zip(&log_moments)
        .map(|(&q, lm)| {
            let f = fit_line(&log_tau, lm)?;
            Ok(ZetaPoint {
                q,
                zeta_hat: f.slope,
                stderr: f.slope_stderr,
                r2: f.r2,
                intercept: f.intercept,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingResult {
        window,
        grid: grid.clone(),
        points,
        log_moments,
    })
}

/// Fills `sums[k] = sum_i |x[i + tau] - x[i]|^q_k` over `i = 0, step, ...`
/// and returns the number of increments.
fn lag_moment_sums(
    path: &[f64],
    tau: usize,
    step: usize,
    qs: &[f64],
    unit: Option<f64>,
    sums: &mut [f64],
) -> usize {
    sums.iter_mut().for_each(|s| *s = 0.0);
    let n = path.len() - tau;
    let diffs = (0..n)
        .step_by(step)
        .map(|i| (path[i + tau] - path[i]).abs());
    match unit {
        // q_k = k q0: one powf per increment, then repeated products
        Some(q0) => {
            let bases: Vec<f64> = diffs.map(|d| d.powf(q0)).collect();
            accumulate_powers(&bases, sums);
        }
        None => {
            for d in diffs {
                for (s, q) in sums.iter_mut().zip(qs) {
                    *s += d.powf(*q);
                }
            }
        }
    }
    n.div_ceil(step)
}

const LANES: usize = 8;

/// Adds `sum_i b_i^(k+1)` to `sums[k]`. Fixed lanes keep the summation order
/// independent of the target while letting the compiler vectorize.
fn accumulate_powers(bases: &[f64], sums: &mut [f64]) {
    let mut acc = vec![[0.0f64; LANES]; sums.len()];
    let chunks = bases.chunks_exact(LANES);
    let rest = chunks.remainder();
    for chunk in chunks {
        let mut p = [0.0; LANES];
        p.copy_from_slice(chunk);
        for lanes in acc.iter_mut() {
            for j in 0..LANES {
                lanes[j] += p[j];
                p[j] *= chunk[j];
            }
        }
    }
    for (s, lanes) in sums.iter_mut().zip(&acc) {
        *s += lanes.iter().sum::<f64>();
    }
    for b in rest {
        let mut p = *b;
        for s in sums.iter_mut() {
            *s += p;
            p *= b;
        }
    }
}
