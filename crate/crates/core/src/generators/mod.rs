//! Synthetic increment generators: Brownian motion, t-Student innovations
//! (tBM) and the Multifractal Random Walk (MRW), each with its theoretical
//! scaling spectrum.

mod mrw;
mod theory;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{MasterSeed, StreamPurpose};
use crate::series::{SeedProvenance, Series, SeriesKind};

pub use mrw::{MrwGenerator, MrwParams};
pub use theory::{theory_spectrum, TheoryModel, TheorySpectrum};

/// t-Student innovation parameters. `n` may be non-integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TbmParams {
    pub n: f64,
    pub len: usize,
}

impl TbmParams {
    pub fn new(n: f64, len: usize) -> Result<Self> {
        let p = TbmParams { n, len };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n > 0.0 && self.n.is_finite()) {
            return Err(Error::domain(format!(
                "degrees of freedom must be positive, got {}",
                self.n
            )));
        }
        if self.len < 2 {
            return Err(Error::domain("series length must be at least 2"));
        }
        Ok(())
    }

    /// Variance of one innovation, finite only for `n > 2`.
    pub fn innovation_variance(&self) -> Option<f64> {
        (self.n > 2.0).then(|| self.n / (self.n - 2.0))
    }
}

/// `len` i.i.d. standard Gaussian increments.
pub fn sample_bm<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    (0..len)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// `len` i.i.d. t-Student draws, `Z / sqrt(G / n)` with `G ~ Gamma(n/2, 2)`.
pub fn sample_tbm<R: Rng + ?Sized>(params: &TbmParams, rng: &mut R) -> Result<Vec<f64>> {
    params.validate()?;
    let chi2 = Gamma::new(params.n / 2.0, 2.0).map_err(|e| Error::domain(e.to_string()))?;
    let mut out = Vec::with_capacity(params.len);
    while out.len() < params.len {
        let z: f64 = rng.sample(StandardNormal);
        let g = chi2.sample(rng);
        let t = z / (g / params.n).sqrt();
        // g underflows to 0 for tiny n; redraw instead of admitting inf
        if t.is_finite() {
            out.push(t);
        }
    }
    Ok(out)
}

fn provenance(generator: &str, seed: MasterSeed, realization: u64) -> SeedProvenance {
    SeedProvenance {
        generator: generator.to_string(),
        master_seed: seed.0,
        realization,
    }
}

pub fn gen_bm(len: usize, seed: MasterSeed, realization: u64) -> Result<Series> {
    if len < 2 {
        return Err(Error::domain("series length must be at least 2"));
    }
    let mut rng = seed.stream(realization, StreamPurpose::Generate);
    Ok(
        Series::from_finite(sample_bm(len, &mut rng), SeriesKind::Increments)
            .with_label("bm")
            .with_provenance(provenance("bm", seed, realization)),
    )
}

pub fn gen_tbm(params: &TbmParams, seed: MasterSeed, realization: u64) -> Result<Series> {
    let mut rng = seed.stream(realization, StreamPurpose::Generate);
    let values = sample_tbm(params, &mut rng)?;
    let name = format!("tbm(n={})", params.n);
    Ok(Series::from_finite(values, SeriesKind::Increments)
        .with_label(name.clone())
        .with_provenance(provenance(&name, seed, realization)))
}

pub fn gen_mrw(params: &MrwParams, seed: MasterSeed, realization: u64) -> Result<Series> {
    MrwGenerator::new(*params)?.generate(seed, realization)
}
