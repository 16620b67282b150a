//! Log-volatility autocovariance `C(T) = Cov[ln|r(t+T)|, ln|r(t)|]` and its
//! fit to `lambda2 ln(L / (T+1))`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ols::fit_line;
use crate::series::Series;

/// Zero share above which a warning is raised.
pub const ZERO_WARN_FRACTION: f64 = 0.01;
/// Zero share above which the fit is refused.
pub const ZERO_MAX_FRACTION: f64 = 0.10;
/// Upper cap on the automatically chosen lag range.
pub const AUTO_T_CAP: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovFit {
    pub lambda2_hat: f64,
    /// `exp(intercept / lambda2_hat)`; absent when `lambda2_hat <= 0`.
    pub corr_len_hat: Option<f64>,
    /// Fitted `lambda2 ln L`.
    pub intercept: f64,
    pub t_min: usize,
    pub t_max: usize,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    pub r2: f64,
    pub zero_count: usize,
    /// `(T, C(T))` for every lag in the fitted range.
    pub curve: Vec<(usize, f64)>,
    pub warnings: Vec<String>,
}

impl CovFit {
    /// Fitted line `intercept - lambda2_hat ln(T + 1)`.
    pub fn fitted(&self, t: usize) -> f64 {
        self.intercept - self.lambda2_hat * (t as f64 + 1.0).ln()
    }

    /// True when the fit describes a log-correlated volatility.
    pub fn is_meaningful(&self) -> bool {
        self.lambda2_hat > 0.0 && self.corr_len_hat.is_some_and(|l| l > 1.0)
    }
}

/// Sample `C(T)` for `T = 1..=t_max`, excluding pairs with a zero increment.
/// Returns the curve and the number of zero increments.
pub fn log_abs_autocovariance(values: &[f64], t_max: usize) -> Result<(Vec<f64>, usize)> {
    let n = values.len();
    if t_max == 0 || t_max + 2 > n {
        return Err(Error::domain(format!(
            "lag range 1..={t_max} too long for {n} values"
        )));
    }
    let zero_count = values.iter().filter(|v| **v == 0.0).count();
    let valid = n - zero_count;
    if valid == 0 {
        return Err(Error::estimation("series is identically zero"));
    }
    let center = values
        .iter()
        .filter(|v| **v != 0.0)
        .map(|v| v.abs().ln())
        .sum::<f64>()
        / valid as f64;
    // centred logs, with 0 and weight 0 standing in for excluded points
    let logs: Vec<f64> = values
        .iter()
        .map(|v| {
            if *v == 0.0 {
                0.0
            } else {
                v.abs().ln() - center
            }
        })
        .collect();

    let mut curve = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let (a, b) = (&logs[t..], &logs[..n - t]);
        let cov = if zero_count == 0 {
            let m = (n - t) as f64;
            let (mut sa, mut sb, mut sab) = (0.0, 0.0, 0.0);
            for (x, y) in a.iter().zip(b) {
                sa += x;
                sb += y;
                sab += x * y;
            }
            sab / m - (sa / m) * (sb / m)
        } else {
            let (mut cnt, mut sa, mut sb, mut sab) = (0usize, 0.0, 0.0, 0.0);
            for i in 0..n - t {
                if values[i + t] != 0.0 && values[i] != 0.0 {
                    cnt += 1;
                    sa += a[i];
                    sb += b[i];
                    sab += a[i] * b[i];
                }
            }
            if cnt < 2 {
                return Err(Error::estimation(format!("no valid pairs at lag {t}")));
            }
            let m = cnt as f64;
            sab / m - (sa / m) * (sb / m)
        };
        curve.push(cov);
    }
    Ok((curve, zero_count))
}

/// Fits `C(T)` over `T = 1..=t_max`: slope `-lambda2`, intercept `lambda2 ln L`.
pub fn fit_log_autocovariance(series: &Series, t_max: usize) -> Result<CovFit> {
    let values = series.values();
    let zero_frac =
        values.iter().filter(|v| **v == 0.0).count() as f64 / values.len().max(1) as f64;
    let mut warnings = Vec::new();
    if zero_frac > ZERO_MAX_FRACTION {
        return Err(Error::estimation(format!(
            "{:.1}% zero increments, log-covariance undefined",
            100.0 * zero_frac
        )));
    }
    if zero_frac > ZERO_WARN_FRACTION {
        let msg = format!(
            "{:.2}% zero increments excluded pairwise",
            100.0 * zero_frac
        );
        warn!("{msg}");
        warnings.push(msg);
    }
    if t_max < 2 {
        return Err(Error::domain("covariance fit needs at least two lags"));
    }
    let (cov, zero_count) = log_abs_autocovariance(values, t_max)?;
    let x: Vec<f64> = (1..=t_max).map(|t| (t as f64 + 1.0).ln()).collect();
    let line = fit_line(&x, &cov)?;
    let lambda2_hat = -line.slope;
    let corr_len_hat = (lambda2_hat > 0.0)
        .then(|| (line.intercept / lambda2_hat).exp())
        .filter(|l| l.is_finite());
    Ok(CovFit {
        lambda2_hat,
        corr_len_hat,
        intercept: line.intercept,
        t_min: 1,
        t_max,
        slope_stderr: line.slope_stderr,
        intercept_stderr: line.intercept_stderr,
        r2: line.r2,
        zero_count,
        curve: (1..=t_max).zip(cov).collect(),
        warnings,
    })
}

/// Two-pass fit: a coarse pass over `T <= 300` estimates `L`, then the fit
/// is repeated over `T in [1, min(L/2, 300)]`.
pub fn fit_log_autocovariance_auto(series: &Series) -> Result<CovFit> {
    let cap = AUTO_T_CAP.min(series.len() / 4);
    if cap < 3 {
        return Err(Error::domain("series too short for a covariance fit"));
    }
    let coarse = fit_log_autocovariance(series, cap)?;
    let t_max = match coarse.corr_len_hat {
        Some(l) if coarse.lambda2_hat > 0.0 => ((l / 2.0).floor() as usize).clamp(3, cap),
        _ => cap,
    };
    if t_max == cap {
        return Ok(coarse);
    }
    fit_log_autocovariance(series, t_max)
}
