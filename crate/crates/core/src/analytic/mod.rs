//! Closed-form distributions of the optimum selection score, outage
//! probabilities, feedback load and average rate.
//!
//! Everything is on a linear scale. Functions taking a [`NetworkConfig`] read
//! the intensity and anchor half-separation from it directly.

mod distance;
mod outage;
mod rate;

pub use distance::{
    cdf_lambda_opt, cdf_upsilon_opt, lemma1_cdf, optimum_score_quantile, pdf_lambda_opt, pdf_upsilon_opt,
    uniform_sum_cdf, xi_exp, xi_pow,
};
pub use outage::{outage, outage_exp, outage_exp_fb, outage_fb, outage_pow, outage_pow_fb};
pub use rate::{
    cdf_y_exp, cdf_y_pow, pdf_y_exp, pdf_y_pow, rate, rate_exp, rate_fading, rate_fading_closed, rate_fading_quad,
    rate_fading_ub, rate_pow, RateKernel, RateQuadrature,
};

use crate::channel::{NetworkConfig, PathLossModel};
use crate::error::{invalid, Result};

/// Which optimum score a [`DistCdf`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoreModel {
    /// `Υ_opt`, the smallest distance product.
    MinProduct,
    /// `Λ_opt`, the smallest distance sum.
    MinSum,
}

impl From<PathLossModel> for ScoreModel {
    fn from(model: PathLossModel) -> Self {
        match model {
            PathLossModel::PowerLaw => ScoreModel::MinProduct,
            PathLossModel::ExpLaw => ScoreModel::MinSum,
        }
    }
}

/// Distribution of the optimum score for a PPP of the given intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistCdf {
    model: ScoreModel,
    intensity: f64,
    d: f64,
}

impl DistCdf {
    pub fn new(model: ScoreModel, intensity: f64, d: f64) -> Result<Self> {
        if !(intensity > 0.0 && intensity.is_finite()) {
            return Err(invalid(format!("intensity {intensity} must be positive and finite")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid(format!("half-separation d = {d} must be positive and finite")));
        }
        Ok(Self { model, intensity, d })
    }

    pub fn from_config(cfg: &NetworkConfig) -> Result<Self> {
        Self::new(cfg.model.into(), cfg.intensity, cfg.d)
    }

    pub fn model(&self) -> ScoreModel {
        self.model
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn cdf(&self, gamma: f64) -> Result<f64> {
        match self.model {
            ScoreModel::MinProduct => cdf_upsilon_opt(gamma, self),
            ScoreModel::MinSum => cdf_lambda_opt(gamma, self),
        }
    }

    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        match self.model {
            ScoreModel::MinProduct => pdf_upsilon_opt(gamma, self),
            ScoreModel::MinSum => pdf_lambda_opt(gamma, self),
        }
    }
}
