//! Cascaded Rayleigh gain, its moments, the gamma fit and fading-averaged SNR.
//!
//! Each element contributes `α·β` with `α, β` Rayleigh of scale `σ = 1/√2`, so
//! that `E[α²] = 1` (unit-variance complex Gaussian taps). The gain of a RIS
//! with `N` elements is `Z = Σ αₙβₙ`.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{invalid, Result};

const PI2: f64 = PI * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathLossModel {
    /// `G(r) = r^η`
    PowerLaw,
    /// `G(r) = exp(α r)`
    ExpLaw,
}

/// Scenario parameters. SNR values are linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// Half of the TX–RX separation.
    pub d: f64,
    /// RIS intensity (nodes per unit area).
    pub intensity: f64,
    pub n_elements: u32,
    /// Power-law exponent.
    pub eta: f64,
    /// Exponential path-loss rate.
    pub alpha: f64,
    pub avg_snr: f64,
    pub target_snr: f64,
    pub model: PathLossModel,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            d: 1.2,
            intensity: 0.5,
            n_elements: 16,
            eta: 4.0,
            alpha: 1.037,
            avg_snr: 1.0,
            target_snr: 10f64.powf(0.5),
            model: PathLossModel::PowerLaw,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("d", self.d),
            ("intensity", self.intensity),
            ("target_snr", self.target_snr),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} = {v} must be positive and finite")));
            }
        }
        if !(self.avg_snr >= 0.0 && self.avg_snr.is_finite()) {
            return Err(invalid(format!("avg_snr = {} must be non-negative", self.avg_snr)));
        }
        if self.n_elements == 0 {
            return Err(invalid("n_elements must be at least 1"));
        }
        match self.model {
            PathLossModel::PowerLaw if !(self.eta > 2.0) => {
                Err(invalid(format!("power-law exponent eta = {} must exceed 2", self.eta)))
            }
            PathLossModel::ExpLaw if !(self.alpha > 0.0) => {
                Err(invalid(format!("exp-law rate alpha = {} must be positive", self.alpha)))
            }
            _ => Ok(()),
        }
    }

    pub fn with_model(mut self, model: PathLossModel) -> Self {
        self.model = model;
        self
    }

    /// `G(‖x_s − X‖)·G(‖X − x_d‖)` as a function of the model's selection score
    /// (distance product for power law, distance sum for exp law).
    pub fn pathloss_product(&self, score: f64) -> f64 {
        match self.model {
            PathLossModel::PowerLaw => score.powf(self.eta),
            PathLossModel::ExpLaw => (self.alpha * score).exp(),
        }
    }

    /// `γ̄·E[Z²]`, the numerator of the fading-averaged SNR.
    pub fn snr_numerator(&self) -> f64 {
        self.avg_snr * ez2(self.n_elements)
    }
}

/// Draws `Z = Σ αₙβₙ` for `n_elements` elements.
pub fn sample_z<R: Rng + ?Sized>(n_elements: u32, rng: &mut R) -> f64 {
    (0..n_elements)
        .map(|_| rayleigh_unit_power(rng) * rayleigh_unit_power(rng))
        .sum()
}

/// Rayleigh variate with `σ = 1/√2`, i.e. `E[α²] = 1`.
fn rayleigh_unit_power<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    (-(1.0 - u).ln()).sqrt()
}

/// Exact second moment `E[Z²] = N + N(N−1)π²/16`.
pub fn ez2(n_elements: u32) -> f64 {
    let n = n_elements as f64;
    n + n * (n - 1.0) * PI2 / 16.0
}

/// Moment-matched gamma approximation of `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaApprox {
    pub k: f64,
    pub theta: f64,
}

impl GammaApprox {
    pub fn mean(&self) -> f64 {
        self.k * self.theta
    }

    pub fn variance(&self) -> f64 {
        self.k * self.theta * self.theta
    }

    /// Gamma density at `x`, evaluated in log space.
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let ln_norm = crate::specfun::ln_gamma(self.k).expect("k > 0") + self.k * self.theta.ln();
        ((self.k - 1.0) * x.ln() - x / self.theta - ln_norm).exp()
    }
}

/// Shape `k = Nπ²/(16 − π²)` and scale `θ = (16 − π²)/(4π)`.
pub fn gamma_params(n_elements: u32) -> GammaApprox {
    let n = n_elements as f64;
    GammaApprox {
        k: n * PI2 / (16.0 - PI2),
        theta: (16.0 - PI2) / (4.0 * PI),
    }
}

/// Fading-averaged SNR `γ̄ E[Z²] / (G·G)`.
pub fn mean_snr(cfg: &NetworkConfig, pathloss_product: f64) -> f64 {
    cfg.avg_snr * ez2(cfg.n_elements) / pathloss_product
}
