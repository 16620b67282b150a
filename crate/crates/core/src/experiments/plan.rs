use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::GheConfig;
use crate::generators::{theory_spectrum, MrwParams, TbmParams, TheoryModel, TheorySpectrum};
use crate::grid::{LagWindow, QGrid};
use crate::surrogates::SurrogateKind;

/// Synthetic model of an experiment, without its length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Bm,
    Tbm {
        n: f64,
    },
    Mrw {
        lambda2: f64,
        #[serde(rename = "L", alias = "corr_len")]
        corr_len: f64,
        #[serde(default = "one")]
        sigma: f64,
        #[serde(default = "one")]
        dt: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl ModelSpec {
    pub fn label(&self) -> String {
        match self {
            ModelSpec::Bm => "bm".to_string(),
            ModelSpec::Tbm { n } => format!("tbm(n={n})"),
            ModelSpec::Mrw {
                lambda2, corr_len, ..
            } => format!("mrw(lambda2={lambda2}, L={corr_len})"),
        }
    }

    pub fn theory(&self) -> TheorySpectrum {
        theory_spectrum(match *self {
            ModelSpec::Bm => TheoryModel::Bm,
            ModelSpec::Tbm { n } => TheoryModel::Tbm { n },
            ModelSpec::Mrw { lambda2, .. } => TheoryModel::Mrw { lambda2 },
        })
    }

    pub fn mrw_params(&self, len: usize) -> Option<MrwParams> {
        match *self {
            ModelSpec::Mrw {
                lambda2,
                corr_len,
                sigma,
                dt,
            } => Some(MrwParams {
                lambda2,
                corr_len,
                sigma,
                dt,
                len,
            }),
            _ => None,
        }
    }

    pub fn validate(&self, len: usize) -> Result<()> {
        match self {
            ModelSpec::Bm if len < 2 => Err(Error::domain("series length must be at least 2")),
            ModelSpec::Bm => Ok(()),
            ModelSpec::Tbm { n } => TbmParams::new(*n, len).map(|_| ()),
            ModelSpec::Mrw { .. } => self.mrw_params(len).expect("mrw").validate(),
        }
    }
}

/// Reference to an input file; resolved by the caller, kept for provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRef {
    pub path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputRef>,
    #[serde(default)]
    pub surrogate: SurrogateKind,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    /// Series length for synthetic models.
    #[serde(default = "default_length")]
    pub length: usize,
    #[serde(default = "default_windows")]
    pub windows: Vec<LagWindow>,
    #[serde(default)]
    pub grid: QGrid,
    pub seed: u64,
    /// Run the full surrogate battery on the input instead of one arm.
    #[serde(default)]
    pub battery: bool,
    #[serde(default)]
    pub ghe: GheConfig,
}

pub const DEFAULT_REALIZATIONS: usize = 200;
pub const DEFAULT_LENGTH: usize = 1 << 17;
/// Fewest repetitions accepted by the surrogate battery.
pub const MIN_BATTERY_REPS: usize = 30;

fn default_realizations() -> usize {
    DEFAULT_REALIZATIONS
}

fn default_length() -> usize {
    DEFAULT_LENGTH
}

fn default_windows() -> Vec<LagWindow> {
    vec![LagWindow::SHORT, LagWindow::LONG]
}

impl ExperimentPlan {
    /// Plan for a synthetic model with desk-scale defaults.
    pub fn synthetic(model: ModelSpec, surrogate: SurrogateKind, seed: u64) -> Self {
        ExperimentPlan {
            model: Some(model),
            input: None,
            surrogate,
            realizations: DEFAULT_REALIZATIONS,
            length: DEFAULT_LENGTH,
            windows: default_windows(),
            grid: QGrid::default(),
            seed,
            battery: false,
            ghe: GheConfig::default(),
        }
    }

    pub fn with_realizations(mut self, k: usize) -> Self {
        self.realizations = k;
        self
    }

    pub fn with_length(mut self, n: usize) -> Self {
        self.length = n;
        self
    }

    pub fn with_windows(mut self, windows: Vec<LagWindow>) -> Self {
        self.windows = windows;
        self
    }

    /// Checks everything except window lengths for file inputs, whose length
    /// is only known after loading.
    pub fn validate(&self) -> Result<()> {
        if self.model.is_some() == self.input.is_some() {
            return Err(Error::domain(
                "a plan needs exactly one of `model` and `input`",
            ));
        }
        if self.realizations < 1 {
            return Err(Error::domain("a plan needs at least one realization"));
        }
        if self.windows.is_empty() {
            return Err(Error::domain("a plan needs at least one lag window"));
        }
        if let Some(model) = &self.model {
            if self.battery {
                return Err(Error::domain("the surrogate battery runs on an input file"));
            }
            model.validate(self.length)?;
            self.check_windows(self.length)?;
        }
        if self.battery && self.realizations < MIN_BATTERY_REPS {
            return Err(Error::domain(format!(
                "the surrogate battery needs at least {MIN_BATTERY_REPS} repetitions"
            )));
        }
        Ok(())
    }

    pub fn check_windows(&self, len: usize) -> Result<()> {
        // GHE runs on the cumulative path, one point longer than the increments
        self.windows
            .iter()
            .try_for_each(|w| w.check_length(len + 1))
    }
}
