//! Tidy CSV tables for plotting.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use mscale::LagWindow;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::reports::{AnyReport, EstimateReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    ZetaVsQ,
    MomentsLogLog,
    TailCcdf,
    CovCurve,
}

impl PlotKind {
    pub const ALL: [PlotKind; 4] = [
        PlotKind::ZetaVsQ,
        PlotKind::MomentsLogLog,
        PlotKind::TailCcdf,
        PlotKind::CovCurve,
    ];
}

impl fmt::Display for PlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlotKind::ZetaVsQ => "zeta_vs_q",
            PlotKind::MomentsLogLog => "moments_loglog",
            PlotKind::TailCcdf => "tail_ccdf",
            PlotKind::CovCurve => "cov_curve",
        })
    }
}

impl FromStr for PlotKind {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| CliError::usage(format!("unknown plot kind {s:?}")))
    }
}

#[derive(Debug, Serialize)]
struct ZetaRow<'a> {
    source: &'a str,
    window: String,
    q: f64,
    zeta_hat: f64,
    zeta_theory: Option<f64>,
    stderr: f64,
}

#[derive(Debug, Serialize)]
struct MomentRow<'a> {
    source: &'a str,
    window: String,
    q: f64,
    tau: usize,
    ln_tau: f64,
    ln_moment: f64,
}

#[derive(Debug, Serialize)]
struct CcdfRow<'a> {
    source: &'a str,
    side: String,
    x: f64,
    ccdf: f64,
    fitted: Option<f64>,
}

#[derive(Debug, Serialize)]
struct CovRow<'a> {
    source: &'a str,
    t: usize,
    ln_t_plus_1: f64,
    cov: f64,
    fitted: f64,
}

fn estimates(report: &AnyReport) -> Option<&[EstimateReport]> {
    match report {
        AnyReport::Estimates(v) => Some(v),
        AnyReport::Estimate(e) => Some(std::slice::from_ref(e)),
        _ => None,
    }
}

fn label(w: LagWindow) -> String {
    format!("{}:{}", w.tau_min(), w.tau_max())
}

fn absent(kind: PlotKind) -> CliError {
    CliError::usage(format!("the report has no data for {kind}"))
}

/// Writes the requested curve as CSV and returns the number of data rows.
/// A report without that curve is a usage error.
pub fn emit_plot_data<W: Write>(report: &AnyReport, kind: PlotKind, out: W) -> CliResult<usize> {
    let mut w = csv::Writer::from_writer(out);
    let mut rows = 0;
    match kind {
        PlotKind::ZetaVsQ => match report {
            AnyReport::Experiment(exp) => {
                for arm in &exp.arms {
                    let k = (arm.realizations as f64).sqrt();
                    for win in &arm.windows {
                        for z in &win.zeta {
                            w.serialize(ZetaRow {
                                source: &arm.name,
                                window: label(win.window),
                                q: z.q,
                                zeta_hat: z.mean,
                                zeta_theory: z.theory,
                                stderr: z.std / k,
                            })?;
                            rows += 1;
                        }
                    }
                }
            }
            _ => {
                for e in estimates(report).ok_or_else(|| absent(kind))? {
                    for z in &e.zeta {
                        w.serialize(ZetaRow {
                            source: &e.source,
                            window: label(e.window),
                            q: z.q,
                            zeta_hat: z.value,
                            zeta_theory: None,
                            stderr: z.stderr,
                        })?;
                        rows += 1;
                    }
                }
            }
        },
        PlotKind::MomentsLogLog => {
            for e in estimates(report).ok_or_else(|| absent(kind))? {
                for m in &e.log_moments {
                    w.serialize(MomentRow {
                        source: &e.source,
                        window: label(e.window),
                        q: m.q,
                        tau: m.tau,
                        ln_tau: (m.tau as f64).ln(),
                        ln_moment: m.ln_moment,
                    })?;
                    rows += 1;
                }
            }
        }
        PlotKind::TailCcdf => {
            let AnyReport::Tails(t) = report else {
                return Err(absent(kind));
            };
            for entry in &t.tails {
                for p in &entry.ccdf {
                    w.serialize(CcdfRow {
                        source: &t.source,
                        side: entry.fit.side.to_string(),
                        x: p.x,
                        ccdf: p.ccdf,
                        fitted: p.fitted,
                    })?;
                    rows += 1;
                }
            }
        }
        PlotKind::CovCurve => {
            let fits: Vec<_> = estimates(report)
                .into_iter()
                .flatten()
                .filter_map(|e| e.covariance.as_ref().map(|c| (e, c)))
                .collect();
            // the curve does not depend on the GHE window; keep the first
            let (e, c) = fits.first().ok_or_else(|| absent(kind))?;
            for &(t, cov) in &c.curve {
                w.serialize(CovRow {
                    source: &e.source,
                    t,
                    ln_t_plus_1: (t as f64 + 1.0).ln(),
                    cov,
                    fitted: c.fitted(t),
                })?;
                rows += 1;
            }
        }
    }
    if rows == 0 {
        return Err(absent(kind));
    }
    w.flush()?;
    Ok(rows)
}
