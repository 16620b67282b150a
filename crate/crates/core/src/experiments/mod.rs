//! Seeded Monte Carlo ensembles: generate or load, apply a surrogate,
//! estimate on every lag window, and summarise against theory.

mod plan;
mod report;
mod run;

pub use plan::{
    ExperimentPlan, InputRef, ModelSpec, DEFAULT_LENGTH, DEFAULT_REALIZATIONS, MIN_BATTERY_REPS,
};
pub use report::{ArmReport, ExperimentReport, StatSummary, TableRow, WindowReport, ZetaSummary};
pub use run::{
    run_experiment, run_experiment_on, surrogate_battery, CODE_VERSION, STAT_A, STAT_ALPHA_LEFT,
    STAT_ALPHA_RIGHT, STAT_B, STAT_C, STAT_H05, STAT_H1, STAT_LAMBDA2_EFF,
};
