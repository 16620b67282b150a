//! Synthetic uni- and multi-scaling time series, surrogate transforms, and
//! multiscaling measurement with the Generalized Hurst Exponent.
//!
//! The crate is organised around [`Series`] values flowing from
//! [`generators`] through [`surrogates`] into [`estimators`]; [`experiments`]
//! runs seeded Monte Carlo ensembles of that pipeline.

pub mod error;
pub mod estimators;
pub mod experiments;
pub mod generators;
pub mod grid;
mod ols;
pub mod rng;
pub mod series;
pub mod surrogates;

pub use error::{Error, Result};
pub use grid::{LagWindow, QGrid};
pub use ols::{fit_line, lstsq, LineFit, LstsqFit};
pub use rng::{MasterSeed, StreamPurpose};
pub use series::{
    abs_moment, cumsum, increments, increments_with, IncrementMode, Series, SeriesKind,
};
