//! Discrete Multifractal Random Walk.
//!
//! Increment `k` is `eps(k) * exp(omega(k))` with `eps` i.i.d. `N(0, sigma^2 dt)`
//! and `omega` a stationary Gaussian sequence with mean `-lambda2 ln(L/dt)` and
//! autocovariance `lambda2 ln(L / ((h+1) dt))` for `h < L/dt`, zero beyond.
//! `omega` is drawn exactly by circulant embedding of that covariance.

use std::sync::Arc;

use log::warn;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{MasterSeed, StreamPurpose};
use crate::series::{SeedProvenance, Series, SeriesKind};

/// Largest tolerated share of spectral mass removed by eigenvalue clipping.
const MAX_CLIPPED_MASS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MrwParams {
    /// Intermittency `lambda^2`.
    pub lambda2: f64,
    /// Autocorrelation length `L`, in the same time unit as `dt`.
    pub corr_len: f64,
    pub sigma: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub len: usize,
}

fn default_dt() -> f64 {
    1.0
}

impl MrwParams {
    pub fn new(lambda2: f64, corr_len: f64, sigma: f64, len: usize) -> Result<Self> {
        let p = MrwParams {
            lambda2,
            corr_len,
            sigma,
            dt: 1.0,
            len,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.lambda2, self.corr_len, self.sigma, self.dt]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("MRW parameters must be finite"));
        }
        if self.lambda2 <= 0.0 {
            return Err(Error::domain("lambda2 must be positive"));
        }
        if self.sigma <= 0.0 || self.dt <= 0.0 {
            return Err(Error::domain("sigma and dt must be positive"));
        }
        if self.corr_len <= self.dt {
            return Err(Error::domain(
                "autocorrelation length must exceed the time step",
            ));
        }
        if self.len < 2 {
            return Err(Error::domain("series length must be at least 2"));
        }
        Ok(())
    }

    /// Variance of `omega`, `lambda2 ln(L / dt)`.
    pub fn omega_variance(&self) -> f64 {
        self.lambda2 * (self.corr_len / self.dt).ln()
    }

    pub fn omega_mean(&self) -> f64 {
        -self.omega_variance()
    }

    /// Autocovariance of `omega` at lag `h` steps.
    pub fn omega_autocov(&self, h: usize) -> f64 {
        let ratio = self.corr_len / ((h as f64 + 1.0) * self.dt);
        if (h as f64) < self.corr_len / self.dt {
            self.lambda2 * ratio.ln()
        } else {
            0.0
        }
    }
}

/// Precomputed circulant spectrum for repeated MRW draws with fixed parameters.
pub struct MrwGenerator {
    params: MrwParams,
    /// `sqrt(eigenvalue / M)` for each circulant frequency.
    amplitude: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    clipped_mass: f64,
}

impl std::fmt::Debug for MrwGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MrwGenerator")
            .field("params", &self.params)
            .field("embedding_len", &self.amplitude.len())
            .field("clipped_mass", &self.clipped_mass)
            .finish()
    }
}

impl MrwGenerator {
    pub fn new(params: MrwParams) -> Result<Self> {
        params.validate()?;
        let support = (params.corr_len / params.dt).ceil() as usize;
        if (params.len as f64) < params.corr_len / params.dt {
            warn!(
                "MRW length {} is shorter than the autocorrelation length {}",
                params.len, params.corr_len
            );
        }
        let m = (2 * params.len.max(support + 1)).next_power_of_two();
        let mut row: Vec<Complex64> = (0..m)
            .map(|j| Complex64::new(params.omega_autocov(j.min(m - j)), 0.0))
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(m);
        fft.process(&mut row);

        let total: f64 = row.iter().map(|c| c.re.abs()).sum();
        let negative: f64 = row.iter().map(|c| (-c.re).max(0.0)).sum();
        let clipped_mass = if total > 0.0 { negative / total } else { 0.0 };
        if clipped_mass > MAX_CLIPPED_MASS {
            return Err(Error::domain(format!(
                "circulant embedding is not positive definite (clipped mass {clipped_mass:.3e})"
            )));
        }
        let amplitude = row
            .iter()
            .map(|c| (c.re.max(0.0) / m as f64).sqrt())
            .collect();
        Ok(MrwGenerator {
            params,
            amplitude,
            fft,
            clipped_mass,
        })
    }

    pub fn params(&self) -> &MrwParams {
        &self.params
    }

    /// Relative spectral mass removed when clipping negative eigenvalues.
    pub fn clipped_mass(&self) -> f64 {
        self.clipped_mass
    }

    pub fn embedding_len(&self) -> usize {
        self.amplitude.len()
    }

    /// One draw of the `omega` field (length `len`, mean included).
    pub fn sample_omega<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut buf: Vec<Complex64> = self
            .amplitude
            .iter()
            .map(|a| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(a * re, a * im)
            })
            .collect();
        self.fft.process(&mut buf);
        let mean = self.params.omega_mean();
        buf[..self.params.len].iter().map(|c| c.re + mean).collect()
    }

    /// One draw of the MRW increments.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let p = &self.params;
        let eps = Normal::new(0.0, p.sigma * p.dt.sqrt()).expect("validated sigma");
        let noise: Vec<f64> = (0..p.len).map(|_| eps.sample(rng)).collect();
        let omega = self.sample_omega(rng);
        noise.iter().zip(&omega).map(|(e, w)| e * w.exp()).collect()
    }

    pub fn generate(&self, seed: MasterSeed, realization: u64) -> Result<Series> {
        let mut rng = seed.stream(realization, StreamPurpose::Generate);
        let values = self.sample(&mut rng);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("MRW draw overflowed"));
        }
        let name = format!(
            "mrw(lambda2={}, L={})",
            self.params.lambda2, self.params.corr_len
        );
        Ok(Series::from_finite(values, SeriesKind::Increments)
            .with_label(name.clone())
            .with_provenance(SeedProvenance {
                generator: name,
                master_seed: seed.0,
                realization,
            }))
    }
}
