use serde::{Deserialize, Serialize};

use super::ghe::ScalingResult;
use crate::error::{Error, Result};
use crate::ols::lstsq;

/// `zeta(q) ~ B q^2 + A q + c`. A negative `b` signals multiscaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolaFit {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub c: f64,
    pub stderrs: ParabolaStderrs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolaStderrs {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub c: f64,
}

impl ParabolaFit {
    /// `|c| / stderr(c)`; small values mean the constant is consistent with 0.
    pub fn const_z(&self) -> f64 {
        if self.stderrs.c > 0.0 {
            self.c.abs() / self.stderrs.c
        } else if self.c == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

pub fn fit_parabola(result: &ScalingResult) -> Result<ParabolaFit> {
    fit_parabola_points(result.grid.qs(), &result.zetas())
}

pub fn fit_parabola_points(qs: &[f64], zetas: &[f64]) -> Result<ParabolaFit> {
    if qs.len() != zetas.len() {
        return Err(Error::domain("q and zeta lengths differ"));
    }
    if qs.len() < 3 {
        return Err(Error::domain("parabolic fit needs at least 3 points"));
    }
    let design: Vec<Vec<f64>> = qs.iter().map(|q| vec![q * q, *q, 1.0]).collect();
    let fit = lstsq(&design, zetas)?;
    Ok(ParabolaFit {
        b: fit.coef[0],
        a: fit.coef[1],
        c: fit.coef[2],
        stderrs: ParabolaStderrs {
            b: fit.stderr[0],
            a: fit.stderr[1],
            c: fit.stderr[2],
        },
    })
}
