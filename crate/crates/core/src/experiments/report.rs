use serde::{Deserialize, Serialize};

use super::plan::ExperimentPlan;
use crate::grid::LagWindow;
use crate::surrogates::SurrogateKind;

/// Ensemble mean and spread of one statistic, with the theory value when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub name: String,
    pub mean: f64,
    /// Sample standard deviation across realizations (`K - 1` denominator).
    pub std: f64,
    /// Standard error of the mean, `std / sqrt(K)`.
    pub stderr: f64,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<f64>,
    /// `(mean - theory) / stderr`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
}

impl StatSummary {
    pub fn from_samples(name: impl Into<String>, samples: &[f64], theory: Option<f64>) -> Self {
        let k = samples.len();
        let mean = samples.iter().sum::<f64>() / k as f64;
        let std = if k > 1 {
            (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64).sqrt()
        } else {
            0.0
        };
        let stderr = std / (k as f64).sqrt();
        let z_score = theory.and_then(|t| (stderr > 0.0).then(|| (mean - t) / stderr));
        StatSummary {
            name: name.into(),
            mean,
            std,
            stderr,
            count: k,
            theory,
            z_score,
        }
    }

    /// `|mean - value| <= n_se * stderr`.
    pub fn within(&self, value: f64, n_se: f64) -> bool {
        (self.mean - value).abs() <= n_se * self.stderr
    }
}

/// Per-q ensemble summary of `zeta_hat`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaSummary {
    pub q: f64,
    pub mean: f64,
    pub std: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub window: LagWindow,
    pub statistics: Vec<StatSummary>,
    pub zeta: Vec<ZetaSummary>,
}

impl WindowReport {
    pub fn stat(&self, name: &str) -> Option<&StatSummary> {
        self.statistics.iter().find(|s| s.name == name)
    }
}

/// One ensemble: a source, a surrogate and its per-window summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmReport {
    pub name: String,
    pub source: String,
    pub surrogate: SurrogateKind,
    pub realizations: usize,
    pub windows: Vec<WindowReport>,
    /// Window-independent statistics (`lambda2_eff`, tail exponents).
    pub statistics: Vec<StatSummary>,
}

impl ArmReport {
    pub fn window(&self, window: LagWindow) -> Option<&WindowReport> {
        self.windows.iter().find(|w| w.window == window)
    }

    pub fn stat(&self, name: &str) -> Option<&StatSummary> {
        self.statistics.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub code_version: String,
    pub seed: u64,
    pub plan: ExperimentPlan,
    pub arms: Vec<ArmReport>,
}

/// A row of the flat table export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub arm: String,
    pub window: String,
    pub statistic: String,
    pub mean: f64,
    pub std: f64,
    pub stderr: f64,
    pub theory: Option<f64>,
    pub z_score: Option<f64>,
}

impl ExperimentReport {
    pub fn arm(&self, name: &str) -> Option<&ArmReport> {
        self.arms.iter().find(|a| a.name == name)
    }

    /// One row per arm, window and statistic; window-independent statistics
    /// use the window label `all`.
    pub fn table(&self) -> Vec<TableRow> {
        let row = |arm: &ArmReport, window: String, s: &StatSummary| TableRow {
            arm: arm.name.clone(),
            window,
            statistic: s.name.clone(),
            mean: s.mean,
            std: s.std,
            stderr: s.stderr,
            theory: s.theory,
            z_score: s.z_score,
        };
        let mut rows = Vec::new();
        for arm in &self.arms {
            for w in &arm.windows {
                let label = format!("{}:{}", w.window.tau_min(), w.window.tau_max());
                rows.extend(w.statistics.iter().map(|s| row(arm, label.clone(), s)));
            }
            rows.extend(arm.statistics.iter().map(|s| row(arm, "all".into(), s)));
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_uses_sample_std() {
        let s = StatSummary::from_samples("B", &[1.0, 2.0, 3.0, 4.0], Some(2.0));
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.stderr - s.std / 2.0).abs() < 1e-15);
        assert!((s.z_score.unwrap() - 0.5 / s.stderr).abs() < 1e-12);
        assert!(s.within(2.0, 1.0));
        let one = StatSummary::from_samples("B", &[0.3], Some(0.0));
        assert_eq!(one.std, 0.0);
        assert_eq!(one.z_score, None);
    }
}
