//! Measurement machinery: GHE scaling exponents, the parabolic curvature
//! coefficient, the log-autocovariance fit and power-law tail exponents.

mod covfit;
mod ghe;
mod parabola;
mod tails;

pub use covfit::{
    fit_log_autocovariance, fit_log_autocovariance_auto, log_abs_autocovariance, CovFit,
    AUTO_T_CAP, ZERO_MAX_FRACTION, ZERO_WARN_FRACTION,
};
pub use ghe::{
    estimate_ghe, estimate_ghe_windows, estimate_ghe_with, GheConfig, ScalingResult, ZetaPoint,
};
pub use parabola::{fit_parabola, fit_parabola_points, ParabolaFit, ParabolaStderrs};
pub use tails::{
    fit_tail, side_values, tail_ccdf, CcdfPoint, TailFit, TailSide, MAX_CANDIDATES, MIN_TAIL,
};
