use serde::{Deserialize, Serialize};

/// Model whose closed-form scaling exponents are known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TheoryModel {
    Bm,
    Tbm { n: f64 },
    Mrw { lambda2: f64 },
}

/// Theoretical `zeta(q)` with its validity bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheorySpectrum {
    model: TheoryModel,
    valid_q_max: f64,
}

impl TheorySpectrum {
    /// Upper bound (exclusive) of the orders where `zeta` is defined.
    pub fn valid_q_max(&self) -> f64 {
        self.valid_q_max
    }

    pub fn model(&self) -> TheoryModel {
        self.model
    }

    /// `zeta(q)`, or `None` outside `(0, valid_q_max)`.
    pub fn zeta(&self, q: f64) -> Option<f64> {
        if !(q > 0.0 && q < self.valid_q_max) {
            return None;
        }
        Some(match self.model {
            TheoryModel::Bm => q / 2.0,
            TheoryModel::Tbm { n } if n < 2.0 => q / n,
            TheoryModel::Tbm { .. } => q / 2.0,
            TheoryModel::Mrw { lambda2 } => -0.5 * lambda2 * q * q + (lambda2 + 0.5) * q,
        })
    }

    /// Generalized Hurst exponent `zeta(q) / q`.
    pub fn hurst(&self, q: f64) -> Option<f64> {
        self.zeta(q).map(|z| z / q)
    }

    /// Second-degree coefficient of `zeta`.
    pub fn curvature(&self) -> f64 {
        match self.model {
            TheoryModel::Mrw { lambda2 } => -0.5 * lambda2,
            _ => 0.0,
        }
    }

    /// First-degree coefficient of `zeta`.
    pub fn linear_coefficient(&self) -> f64 {
        match self.model {
            TheoryModel::Bm => 0.5,
            TheoryModel::Tbm { n } if n < 2.0 => 1.0 / n,
            TheoryModel::Tbm { .. } => 0.5,
            TheoryModel::Mrw { lambda2 } => lambda2 + 0.5,
        }
    }
}

pub fn theory_spectrum(model: TheoryModel) -> TheorySpectrum {
    let valid_q_max = match model {
        TheoryModel::Tbm { n } => n,
        // MRW moments exist for q < 1/lambda2 in the continuous limit
        TheoryModel::Mrw { lambda2 } => 1.0 / lambda2,
        TheoryModel::Bm => f64::INFINITY,
    };
    TheorySpectrum { model, valid_q_max }
}
