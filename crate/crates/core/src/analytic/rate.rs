use std::f64::consts::{LN_2, PI};

#[cfg(test)]
use super::pdf_upsilon_opt;
use super::{optimum_score_quantile, xi_exp, xi_pow, DistCdf};
use crate::channel::{ez2, gamma_params, NetworkConfig, PathLossModel};
use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate, integrate_with_breaks};
use crate::specfun::{digamma, ellip_e, ellip_k, genhyp_with_magnitude, ln_gamma, SeriesControl};

/// Below this value of `γ̄y` the closed form is not attempted.
const SMALL_ARGUMENT: f64 = 1e-2;
/// Largest accepted rounding-error estimate of the closed form, relative to its value.
const MAX_CLOSED_FORM_ERROR: f64 = 1e-5;
/// Tail mass of the optimum score left out of the rate integrals.
const TAIL_MASS: f64 = 1e-14;

/// Tolerances for the rate integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateQuadrature {
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
}

impl RateQuadrature {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        for (name, tol) in [("abs_tol", abs_tol), ("rel_tol", rel_tol)] {
            if !(tol > 0.0 && tol <= 1e-2) {
                return Err(invalid(format!("{name} = {tol} not in (0, 1e-2]")));
            }
        }
        if max_subdivisions < 50 {
            return Err(invalid(format!("max_subdivisions = {max_subdivisions} < 50")));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_subdivisions(&self) -> usize {
        self.max_subdivisions
    }
}

impl Default for RateQuadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 1000,
        }
    }
}

/// Inner rate used inside the average-rate integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateKernel {
    /// Fading-averaged rate under the gamma approximation.
    #[default]
    Exact,
    /// Jensen upper bound `log₂(1 + γ̄·E[Z²]·y)`.
    JensenBound,
}

fn check_y(func: &'static str, y: f64) -> Result<()> {
    if y >= 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            func,
            value: y,
            reason: "must be finite and non-negative",
        })
    }
}

/// `E[log₂(1 + γ̄·y·Z²)]` with `Z` gamma distributed, by adaptive quadrature.
pub fn rate_fading_quad(y: f64, cfg: &NetworkConfig, q: &RateQuadrature) -> Result<f64> {
    check_y("rate_fading_quad", y)?;
    let g = cfg.avg_snr * y;
    if g == 0.0 {
        return Ok(0.0);
    }
    let gp = gamma_params(cfg.n_elements);
    let (k, theta) = (gp.k, gp.theta);
    let ln_norm = ln_gamma(k)? + k * theta.ln();
    let integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let density = ((k - 1.0) * x.ln() - x / theta - ln_norm).exp();
        (g * x * x).ln_1p() / LN_2 * density
    };
    let mean = k * theta;
    let sd = k.sqrt() * theta;
    let breaks = [0.0, mean, mean + 6.0 * sd, mean + 40.0 * (sd + theta)];
    integrate_with_breaks(integrand, &breaks, q.abs_tol, q.rel_tol, q.max_subdivisions)
}

/// Closed form of `E[log₂(1 + γ̄·y·Z²)]` under the gamma approximation, built
/// from `ψ`, a `₂F₃` and two `₁F₂` series.
///
/// Fails with [`Error::IllConditioned`] when cancellation among the series
/// terms could cost more than about five significant digits, which happens for
/// small `γ̄y` (the threshold depends on `N`).
pub fn rate_fading_closed(y: f64, cfg: &NetworkConfig) -> Result<f64> {
    let g = cfg.avg_snr * y;
    if !(g >= SMALL_ARGUMENT && g.is_finite()) {
        return Err(Error::Domain {
            func: "rate_fading_closed",
            value: g,
            reason: "gamma_bar * y below the small-argument cutoff 1e-2",
        });
    }
    let gp = gamma_params(cfg.n_elements);
    let (k, theta) = (gp.k, gp.theta);
    if k > 0.5 && (k - k.round()).abs() < 1e-6 {
        return Err(Error::Pole {
            func: "rate_fading_closed",
            value: k,
        });
    }
    let ctl = SeriesControl::default();
    let z = -1.0 / (4.0 * theta * theta * g);

    let (h1, m1) = genhyp_with_magnitude(&[1.0, 1.0], &[2.0, 1.5 - k / 2.0, 2.0 - k / 2.0], z, ctl)?;
    let s1 = 1.0 / (theta * theta * g * (k * k - 3.0 * k + 2.0));

    let (ha, ma) = genhyp_with_magnitude(&[k / 2.0], &[0.5, k / 2.0 + 1.0], z, ctl)?;
    let (hb, mb) = genhyp_with_magnitude(&[k / 2.0 + 0.5], &[1.5, k / 2.0 + 1.5], z, ctl)?;
    let ln_pref = PI.ln() - 0.5 * k * g.ln() - k * theta.ln() - ln_gamma(k + 1.0)?;
    let pref = ln_pref.exp();
    let sa = pref / (PI * k / 2.0).sin();
    let sb = -pref * k / ((PI * k / 2.0).cos() * g.sqrt() * theta * (1.0 + k));

    let logs = 2.0 * theta.ln() + g.ln() + 2.0 * digamma(k)?;
    let total = logs + s1 * h1 + sa * ha + sb * hb;
    let magnitude = logs.abs() + (s1 * m1).abs() + (sa * ma).abs() + (sb * mb).abs();
    let rel_error = f64::EPSILON * magnitude / total.abs();
    if !(rel_error <= MAX_CLOSED_FORM_ERROR) {
        return Err(Error::IllConditioned {
            func: "rate_fading_closed",
            rel_error,
        });
    }
    Ok(total / LN_2)
}

/// Jensen upper bound `log₂(1 + γ̄·E[Z²]·y)` on the fading-averaged rate.
pub fn rate_fading_ub(y: f64, cfg: &NetworkConfig) -> Result<f64> {
    check_y("rate_fading_ub", y)?;
    Ok((cfg.avg_snr * ez2(cfg.n_elements) * y).ln_1p() / LN_2)
}

/// Fading-averaged rate at path-loss inverse `y`: the closed form where it is
/// well conditioned, quadrature otherwise, or the Jensen bound.
pub fn rate_fading(y: f64, cfg: &NetworkConfig, kernel: RateKernel, q: &RateQuadrature) -> Result<f64> {
    match kernel {
        RateKernel::JensenBound => rate_fading_ub(y, cfg),
        RateKernel::Exact => {
            check_y("rate_fading", y)?;
            if cfg.avg_snr * y < SMALL_ARGUMENT {
                return rate_fading_quad(y, cfg, q);
            }
            match rate_fading_closed(y, cfg) {
                Ok(r) => Ok(r),
                Err(Error::IllConditioned { .. } | Error::Pole { .. } | Error::NonConvergence { .. }) => {
                    rate_fading_quad(y, cfg, q)
                }
                Err(e) => Err(e),
            }
        }
    }
}

/// Kernel evaluated inside the average-rate integrals. The exact kernel uses
/// quadrature rather than the closed form: the closed form is accurate to
/// about 1e-7 and hands over to quadrature where it is ill conditioned, and
/// both would leave kinks that stall the outer integral near its tolerance.
fn integrand_kernel(y: f64, cfg: &NetworkConfig, kernel: RateKernel, q: &RateQuadrature) -> Result<f64> {
    match kernel {
        RateKernel::JensenBound => rate_fading_ub(y, cfg),
        RateKernel::Exact => rate_fading_quad(y, cfg, q),
    }
}

fn check_positive(func: &'static str, y: f64) -> Result<()> {
    if y > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            func,
            value: y,
            reason: "must be positive",
        })
    }
}

/// Density of `Y = Υ_opt^{−η}`, the inverse power-law path loss of the chosen node.
pub fn pdf_y_pow(y: f64, cfg: &NetworkConfig) -> Result<f64> {
    check_positive("pdf_y_pow", y)?;
    let (d, eta, lambda) = (cfg.d, cfg.eta, cfg.intensity);
    let d2 = d * d;
    let d4 = d2 * d2;
    let branch = d.powf(-2.0 * eta);
    if y < branch {
        // Υ = y^{−1/η} > d²
        let m = d4 * y.powf(2.0 / eta);
        let gamma = y.powf(-1.0 / eta);
        Ok(2.0 * lambda * (-2.0 * gamma * lambda * ellip_e(m)?).exp() * y.powf(-1.0 - 1.0 / eta) * ellip_k(m)? / eta)
    } else if y > branch {
        let v = y.powf(-2.0 / eta);
        let m = v / d4;
        let (km, em) = (ellip_k(m)?, ellip_e(m)?);
        let exponent = -2.0 * lambda / d2 * (d4 * em + (v - d4) * km);
        Ok(2.0 * lambda * y.powf(-1.0 - 2.0 / eta) * km * exponent.exp() / (d2 * eta))
    } else {
        Err(Error::Singularity {
            func: "pdf_y_pow",
            value: y,
        })
    }
}

/// CDF of `Y = Υ_opt^{−η}`.
pub fn cdf_y_pow(y: f64, cfg: &NetworkConfig) -> Result<f64> {
    check_y("cdf_y_pow", y)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    let dist = DistCdf::new(super::ScoreModel::MinProduct, cfg.intensity, cfg.d)?;
    Ok((-xi_pow(y.powf(-1.0 / cfg.eta), &dist)?).exp())
}

/// Density of `Y = exp(−αΛ_opt)`; zero above `e^{−2αd}` with an integrable
/// singularity at that point.
pub fn pdf_y_exp(y: f64, cfg: &NetworkConfig) -> Result<f64> {
    check_positive("pdf_y_exp", y)?;
    let (d, alpha, lambda) = (cfg.d, cfg.alpha, cfg.intensity);
    let edge = (-2.0 * alpha * d).exp();
    if y > edge {
        return Ok(0.0);
    }
    let ln_y = y.ln();
    let disc = ln_y * ln_y - 4.0 * alpha * alpha * d * d;
    if !(disc > 0.0) {
        return Err(Error::Singularity {
            func: "pdf_y_exp",
            value: y,
        });
    }
    let root = disc.sqrt();
    let exponent = lambda * PI * ln_y * root / (4.0 * alpha * alpha);
    Ok(lambda * PI * (ln_y * ln_y - 2.0 * alpha * alpha * d * d) * exponent.exp() / (2.0 * alpha * alpha * y * root))
}

/// CDF of `Y = exp(−αΛ_opt)`.
pub fn cdf_y_exp(y: f64, cfg: &NetworkConfig) -> Result<f64> {
    check_y("cdf_y_exp", y)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    let dist = DistCdf::new(super::ScoreModel::MinSum, cfg.intensity, cfg.d)?;
    let level = -y.ln() / cfg.alpha;
    Ok((-xi_exp(level.max(0.0), &dist)?).exp())
}

fn check_rate_config(cfg: &NetworkConfig, model: PathLossModel) -> Result<()> {
    cfg.validate()?;
    if cfg.model != model {
        return Err(invalid(format!(
            "expected a {model:?} configuration, got {:?}",
            cfg.model
        )));
    }
    Ok(())
}

/// Average rate of the min-product rule under power-law path loss. With a
/// feedback threshold `t`, nodes with distance product above `t` stay silent
/// and an empty feedback set contributes zero rate.
pub fn rate_pow(cfg: &NetworkConfig, q: &RateQuadrature, t: Option<f64>, kernel: RateKernel) -> Result<f64> {
    check_rate_config(cfg, PathLossModel::PowerLaw)?;
    if let Some(t) = t {
        if !(t > 0.0) {
            return Err(invalid(format!("feedback threshold {t} must be positive")));
        }
    }
    if cfg.avg_snr == 0.0 {
        return Ok(0.0);
    }
    let dist = DistCdf::new(super::ScoreModel::MinProduct, cfg.intensity, cfg.d)?;
    let eta = cfg.eta;
    let gamma_hi = optimum_score_quantile(&dist, 1.0 - TAIL_MASS)?;
    let gamma_lo = optimum_score_quantile(&dist, TAIL_MASS)?;
    // Integrate over u = ln y.
    let mut u_lo = -eta * gamma_hi.ln();
    if let Some(t) = t {
        u_lo = u_lo.max(-eta * t.ln());
    }
    let u_hi = -eta * gamma_lo.ln();
    if u_lo >= u_hi {
        return Ok(0.0);
    }
    let u_branch = -2.0 * eta * cfg.d.ln();
    let mut points = vec![u_lo];
    if u_lo < u_branch && u_branch < u_hi {
        points.push(u_branch);
    }
    points.push(u_hi);
    let failure = std::cell::Cell::new(None);
    let integrand = |u: f64| {
        let y = u.exp();
        match (integrand_kernel(y, cfg, kernel, q), pdf_y_pow(y, cfg)) {
            (Ok(r), Ok(p)) => r * p * y,
            (Err(e), _) | (_, Err(e)) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let result = integrate_with_breaks(integrand, &points, q.abs_tol, q.rel_tol, q.max_subdivisions);
    match failure.take() {
        Some(e) => Err(e),
        None => result,
    }
}

/// Average rate of the min-sum rule under exp-law path loss, optionally with
/// a feedback threshold `t` (no node feeds back when `t ≤ 2d`).
pub fn rate_exp(cfg: &NetworkConfig, q: &RateQuadrature, t: Option<f64>, kernel: RateKernel) -> Result<f64> {
    check_rate_config(cfg, PathLossModel::ExpLaw)?;
    let d = cfg.d;
    if let Some(t) = t {
        if !(t > 0.0) {
            return Err(invalid(format!("feedback threshold {t} must be positive")));
        }
        if t <= 2.0 * d {
            return Ok(0.0);
        }
    }
    if cfg.avg_snr == 0.0 {
        return Ok(0.0);
    }
    let dist = DistCdf::new(super::ScoreModel::MinSum, cfg.intensity, d)?;
    let lambda = cfg.intensity;
    let root = |level: f64| (level * level - 4.0 * d * d).sqrt();
    let mut u_hi = root(optimum_score_quantile(&dist, 1.0 - TAIL_MASS)?);
    if let Some(t) = t {
        u_hi = u_hi.min(root(t));
    }
    // u = √(L² − 4d²) absorbs the 1/√ singularity of the density at L = 2d.
    let failure = std::cell::Cell::new(None);
    let integrand = |u: f64| {
        let level = (u * u + 4.0 * d * d).sqrt();
        let weight =
            PI * lambda * (level * level - 2.0 * d * d) / (2.0 * level) * (-lambda * PI * level * u / 4.0).exp();
        match integrand_kernel((-cfg.alpha * level).exp(), cfg, kernel, q) {
            Ok(r) => r * weight,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let result = integrate(integrand, 0.0, u_hi, q.abs_tol, q.rel_tol, q.max_subdivisions);
    match failure.take() {
        Some(e) => Err(e),
        None => result,
    }
}

/// Average rate of the optimum rule for whichever model `cfg` uses.
pub fn rate(cfg: &NetworkConfig, q: &RateQuadrature, t: Option<f64>, kernel: RateKernel) -> Result<f64> {
    match cfg.model {
        PathLossModel::PowerLaw => rate_pow(cfg, q, t, kernel),
        PathLossModel::ExpLaw => rate_exp(cfg, q, t, kernel),
    }
}

/// `pdf_upsilon_opt` pushed through `y = γ^{−η}`.
#[cfg(test)]
fn pdf_y_pow_transform(y: f64, cfg: &NetworkConfig) -> Result<f64> {
    let dist = DistCdf::new(super::ScoreModel::MinProduct, cfg.intensity, cfg.d)?;
    let gamma = y.powf(-1.0 / cfg.eta);
    Ok(pdf_upsilon_opt(gamma, &dist)? * gamma / (cfg.eta * y))
}
