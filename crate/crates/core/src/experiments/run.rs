use log::warn;
use rayon::prelude::*;

use super::plan::{ExperimentPlan, ModelSpec, MIN_BATTERY_REPS};
use super::report::{ArmReport, ExperimentReport, StatSummary, WindowReport, ZetaSummary};
use crate::error::{Error, Result};
use crate::estimators::{
    estimate_ghe_windows, fit_log_autocovariance_auto, fit_parabola, fit_tail, GheConfig, TailSide,
};
use crate::generators::{
    gen_bm, gen_tbm, theory_spectrum, MrwGenerator, TbmParams, TheoryModel, TheorySpectrum,
};
use crate::grid::{LagWindow, QGrid};
use crate::rng::MasterSeed;
use crate::series::Series;
use crate::surrogates::{self, SurrogateKind};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const STAT_B: &str = "B";
pub const STAT_A: &str = "A";
pub const STAT_C: &str = "c";
pub const STAT_H05: &str = "H(0.5)";
pub const STAT_H1: &str = "H(1)";
pub const STAT_LAMBDA2_EFF: &str = "lambda2_eff";
pub const STAT_ALPHA_LEFT: &str = "alpha_left";
pub const STAT_ALPHA_RIGHT: &str = "alpha_right";

enum Source<'a> {
    Bm { len: usize },
    Tbm(TbmParams),
    Mrw(MrwGenerator),
    Fixed(&'a Series),
}

impl Source<'_> {
    fn for_model(model: ModelSpec, len: usize) -> Result<Self> {
        Ok(match model {
            ModelSpec::Bm => Source::Bm { len },
            ModelSpec::Tbm { n } => Source::Tbm(TbmParams::new(n, len)?),
            ModelSpec::Mrw { .. } => {
                Source::Mrw(MrwGenerator::new(model.mrw_params(len).expect("mrw"))?)
            }
        })
    }

    fn draw(&self, seed: MasterSeed, index: u64) -> Result<Series> {
        match self {
            Source::Bm { len } => gen_bm(*len, seed, index),
            Source::Tbm(p) => gen_tbm(p, seed, index),
            Source::Mrw(g) => g.generate(seed, index),
            Source::Fixed(s) => Ok((*s).clone()),
        }
    }
}

struct Arm<'a> {
    name: &'a str,
    source: Source<'a>,
    source_label: String,
    surrogate: SurrogateKind,
    realizations: usize,
    /// Model behind the source, for theory values.
    model: Option<ModelSpec>,
    covariance: bool,
    tails: bool,
}

#[derive(Debug, Clone)]
struct WindowSample {
    b: f64,
    a: f64,
    c: f64,
    zetas: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Realization {
    windows: Vec<WindowSample>,
    lambda2_eff: Option<f64>,
    alpha: Option<(f64, f64)>,
}

fn realize(
    arm: &Arm<'_>,
    seed: MasterSeed,
    index: u64,
    windows: &[LagWindow],
    grid: &QGrid,
    ghe: GheConfig,
) -> Result<Realization> {
    let series = surrogates::apply(arm.surrogate, arm.source.draw(seed, index)?, seed, index)?;
    let results = estimate_ghe_windows(&series, windows, grid, ghe)?;
    let windows = results
        .iter()
        .map(|r| {
            let p = fit_parabola(r)?;
            Ok(WindowSample {
                b: p.b,
                a: p.a,
                c: p.c,
                zetas: r.zetas(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lambda2_eff = if arm.covariance {
        Some(fit_log_autocovariance_auto(&series)?.lambda2_hat)
    } else {
        None
    };
    let alpha = if arm.tails {
        Some((
            fit_tail(&series, TailSide::Left)?.alpha,
            fit_tail(&series, TailSide::Right)?.alpha,
        ))
    } else {
        None
    };
    Ok(Realization {
        windows,
        lambda2_eff,
        alpha,
    })
}

/// Theory spectrum of the arm's output, if the source has one.
fn arm_theory(
    model: Option<ModelSpec>,
    surrogate: SurrogateKind,
    lambda2_eff: Option<f64>,
) -> Option<TheorySpectrum> {
    let model = model?;
    match (surrogate, model) {
        (SurrogateKind::None, m) => Some(m.theory()),
        (SurrogateKind::Shuffle, ModelSpec::Mrw { .. }) => Some(theory_spectrum(TheoryModel::Bm)),
        (SurrogateKind::Shuffle, m) => Some(m.theory()),
        (SurrogateKind::Gaussianize, ModelSpec::Mrw { .. }) => {
            lambda2_eff.map(|l| theory_spectrum(TheoryModel::Mrw { lambda2: l }))
        }
        (SurrogateKind::Gaussianize, _) => Some(theory_spectrum(TheoryModel::Bm)),
    }
}

fn lambda2_theory(model: Option<ModelSpec>, surrogate: SurrogateKind) -> Option<f64> {
    match (model?, surrogate) {
        (ModelSpec::Mrw { lambda2, .. }, SurrogateKind::None) => Some(lambda2),
        (ModelSpec::Mrw { .. }, SurrogateKind::Shuffle) => Some(0.0),
        _ => None,
    }
}

fn run_arm(
    arm: &Arm<'_>,
    seed: MasterSeed,
    windows: &[LagWindow],
    grid: &QGrid,
    ghe: GheConfig,
) -> Result<ArmReport> {
    // collect() keeps index order, so the reduction below is schedule-independent
    let outcomes: Vec<Result<Realization>> = (0..arm.realizations as u64)
        .into_par_iter()
        .map(|k| realize(arm, seed, k, windows, grid, ghe))
        .collect();
    let mut samples = Vec::with_capacity(outcomes.len());
    for (k, r) in outcomes.into_iter().enumerate() {
        samples.push(r.map_err(|e| Error::Realization {
            index: k as u64,
            seed: seed.0,
            source: Box::new(e),
        })?);
    }

    let mut statistics = Vec::new();
    let lambda2_eff = if arm.covariance {
        let v: Vec<f64> = samples.iter().filter_map(|s| s.lambda2_eff).collect();
        let summary = StatSummary::from_samples(
            STAT_LAMBDA2_EFF,
            &v,
            lambda2_theory(arm.model, arm.surrogate),
        );
        let mean = summary.mean;
        statistics.push(summary);
        Some(mean)
    } else {
        None
    };
    if arm.tails {
        let left: Vec<f64> = samples
            .iter()
            .filter_map(|s| s.alpha.map(|a| a.0))
            .collect();
        let right: Vec<f64> = samples
            .iter()
            .filter_map(|s| s.alpha.map(|a| a.1))
            .collect();
        statistics.push(StatSummary::from_samples(STAT_ALPHA_LEFT, &left, None));
        statistics.push(StatSummary::from_samples(STAT_ALPHA_RIGHT, &right, None));
    }

    let theory = arm_theory(arm.model, arm.surrogate, lambda2_eff);
    let qs = grid.qs();
    let theory_zeta: Option<Vec<f64>> =
        theory.and_then(|t| qs.iter().map(|q| t.zeta(*q)).collect());
    // (B, A) only when the closed form holds over the whole grid
    let theory_parabola = theory
        .filter(|_| theory_zeta.is_some())
        .map(|t| (t.curvature(), t.linear_coefficient()));

    let window_reports = windows
        .iter()
        .enumerate()
        .map(|(wi, window)| {
            let col = |f: &dyn Fn(&WindowSample) -> f64| -> Vec<f64> {
                samples.iter().map(|s| f(&s.windows[wi])).collect()
            };
            let mut stats = vec![
                StatSummary::from_samples(STAT_B, &col(&|w| w.b), theory_parabola.map(|p| p.0)),
                StatSummary::from_samples(STAT_A, &col(&|w| w.a), theory_parabola.map(|p| p.1)),
                StatSummary::from_samples(STAT_C, &col(&|w| w.c), theory_parabola.map(|_| 0.0)),
            ];
            for (name, q) in [(STAT_H05, 0.5), (STAT_H1, 1.0)] {
                if let Some(i) = grid.position(q) {
                    stats.push(StatSummary::from_samples(
                        name,
                        &col(&|w| w.zetas[i] / q),
                        theory.and_then(|t| t.hurst(q)),
                    ));
                }
            }
            let zeta = qs
                .iter()
                .enumerate()
                .map(|(i, q)| {
                    let s = StatSummary::from_samples("zeta", &col(&|w| w.zetas[i]), None);
                    ZetaSummary {
                        q: *q,
                        mean: s.mean,
                        std: s.std,
                        theory: theory.and_then(|t| t.zeta(*q)),
                    }
                })
                .collect();
            WindowReport {
                window: *window,
                statistics: stats,
                zeta,
            }
        })
        .collect();

    Ok(ArmReport {
        name: arm.name.to_string(),
        source: arm.source_label.clone(),
        surrogate: arm.surrogate,
        realizations: arm.realizations,
        windows: window_reports,
        statistics,
    })
}

fn arm_name(surrogate: SurrogateKind) -> &'static str {
    match surrogate {
        SurrogateKind::None => "plain",
        SurrogateKind::Shuffle => "shuffled",
        SurrogateKind::Gaussianize => "gaussianized",
    }
}

fn report(plan: &ExperimentPlan, arms: Vec<ArmReport>) -> ExperimentReport {
    ExperimentReport {
        code_version: CODE_VERSION.to_string(),
        seed: plan.seed,
        plan: plan.clone(),
        arms,
    }
}

/// Runs a synthetic-model plan: `K` realizations, surrogate, GHE on every
/// window and the parabolic fit, aggregated against theory.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let model = plan.model.ok_or_else(|| {
        Error::domain("plan reads an input file; load it and call run_experiment_on")
    })?;
    let arm = Arm {
        name: arm_name(plan.surrogate),
        source: Source::for_model(model, plan.length)?,
        source_label: model.label(),
        surrogate: plan.surrogate,
        realizations: plan.realizations,
        model: Some(model),
        covariance: matches!(model, ModelSpec::Mrw { .. }),
        tails: false,
    };
    let r = run_arm(
        &arm,
        MasterSeed(plan.seed),
        &plan.windows,
        &plan.grid,
        plan.ghe,
    )?;
    Ok(report(plan, vec![r]))
}

/// Runs an input-file plan on the loaded series.
pub fn run_experiment_on(plan: &ExperimentPlan, series: &Series) -> Result<ExperimentReport> {
    plan.validate()?;
    if plan.input.is_none() {
        return Err(Error::domain(
            "plan has a synthetic model; call run_experiment",
        ));
    }
    plan.check_windows(series.len())?;
    if plan.battery {
        return surrogate_battery(plan, series);
    }
    let arm = Arm {
        name: arm_name(plan.surrogate),
        source: Source::Fixed(series),
        source_label: series.label.clone(),
        surrogate: plan.surrogate,
        realizations: if plan.surrogate == SurrogateKind::None {
            1
        } else {
            plan.realizations
        },
        model: None,
        covariance: true,
        tails: false,
    };
    let r = run_arm(
        &arm,
        MasterSeed(plan.seed),
        &plan.windows,
        &plan.grid,
        plan.ghe,
    )?;
    Ok(report(plan, vec![r]))
}

/// Plain, shuffled and Gaussianized versions of one input, plus a tBM
/// ensemble whose `n` equals the heavier fitted tail exponent and whose
/// length matches the input.
pub fn surrogate_battery(plan: &ExperimentPlan, series: &Series) -> Result<ExperimentReport> {
    let reps = plan.realizations;
    if reps < MIN_BATTERY_REPS {
        return Err(Error::domain(format!(
            "the surrogate battery needs at least {MIN_BATTERY_REPS} repetitions, got {reps}"
        )));
    }
    plan.check_windows(series.len())?;
    let seed = MasterSeed(plan.seed);
    let left = fit_tail(series, TailSide::Left)?;
    let right = fit_tail(series, TailSide::Right)?;
    let heavier = left.alpha.min(right.alpha);
    if plan.grid.max() >= heavier {
        warn!(
            "largest moment order {} is not below the fitted tail exponent {heavier:.3}",
            plan.grid.max()
        );
    }
    let matched = ModelSpec::Tbm { n: heavier };
    let label = series.label.clone();
    let arms = [
        Arm {
            name: "input",
            source: Source::Fixed(series),
            source_label: label.clone(),
            surrogate: SurrogateKind::None,
            realizations: 1,
            model: None,
            covariance: true,
            tails: true,
        },
        Arm {
            name: "shuffled",
            source: Source::Fixed(series),
            source_label: label.clone(),
            surrogate: SurrogateKind::Shuffle,
            realizations: reps,
            model: None,
            covariance: false,
            tails: true,
        },
        Arm {
            name: "gaussianized",
            source: Source::Fixed(series),
            source_label: label,
            surrogate: SurrogateKind::Gaussianize,
            realizations: reps,
            model: None,
            covariance: true,
            tails: false,
        },
        Arm {
            name: "matched_tbm",
            source: Source::for_model(matched, series.len())?,
            source_label: matched.label(),
            surrogate: SurrogateKind::None,
            realizations: reps,
            model: Some(matched),
            covariance: false,
            tails: false,
        },
    ];
    let reports = arms
        .iter()
        .map(|arm| run_arm(arm, seed, &plan.windows, &plan.grid, plan.ghe))
        .collect::<Result<Vec<_>>>()?;
    Ok(report(plan, reports))
}
