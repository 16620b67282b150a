//! JSON documents written by the `estimate` and `tails` commands.

use mscale::estimators::{CcdfPoint, CovFit, ParabolaFit, ScalingResult, TailFit, TailSide};
use mscale::experiments::ExperimentReport;
use mscale::{LagWindow, QGrid};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaRow {
    pub q: f64,
    pub value: f64,
    /// OLS standard error of the slope.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub q: f64,
    pub tau: usize,
    pub ln_moment: f64,
}

/// GHE exponents and parabolic fit of one series over one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub source: String,
    pub window: LagWindow,
    pub grid: QGrid,
    pub zeta: Vec<ZetaRow>,
    pub parabola: ParabolaFit,
    pub log_moments: Vec<MomentRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance: Option<CovFit>,
}

impl EstimateReport {
    pub fn new(
        source: impl Into<String>,
        result: &ScalingResult,
        parabola: ParabolaFit,
        covariance: Option<CovFit>,
    ) -> Self {
        let zeta = result
            .points
            .iter()
            .map(|p| ZetaRow {
                q: p.q,
                value: p.zeta_hat,
                stderr: p.stderr,
            })
            .collect();
        let log_moments = result
            .grid
            .qs()
            .iter()
            .zip(&result.log_moments)
            .flat_map(|(&q, row)| {
                result
                    .window
                    .taus()
                    .zip(row)
                    .map(move |(tau, &ln_moment)| MomentRow { q, tau, ln_moment })
            })
            .collect();
        EstimateReport {
            source: source.into(),
            window: result.window,
            grid: result.grid.clone(),
            zeta,
            parabola,
            log_moments,
            covariance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEntry {
    pub fit: TailFit,
    pub ccdf: Vec<CcdfPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailsReport {
    pub source: String,
    pub tails: Vec<TailEntry>,
}

impl TailsReport {
    pub fn side(&self, side: TailSide) -> Option<&TailEntry> {
        self.tails.iter().find(|t| t.fit.side == side)
    }
}

/// Any report the CLI writes, recognised by its fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyReport {
    Experiment(ExperimentReport),
    Estimates(Vec<EstimateReport>),
    Estimate(EstimateReport),
    Tails(TailsReport),
}

impl AnyReport {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
