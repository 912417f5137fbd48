use std::f64::consts::PI;

use super::{DistCdf, ScoreModel};
use crate::error::{invalid, Error, Result};
use crate::specfun::{carlson_rd, ellip_e, ellip_k};

/// Area of the Cassini region `{x : ‖x − x_s‖·‖x − x_d‖ ≤ γ}`.
pub(crate) fn cassini_area(gamma: f64, d: f64) -> Result<f64> {
    let d2 = d * d;
    if gamma == 0.0 {
        Ok(0.0)
    } else if gamma < d2 {
        // d⁴E(m) + (γ² − d⁴)K(m) = γ²(K(m) − D(m)) with D(m) = (K − E)/m, which
        // avoids the cancellation between E and K at small m.
        let m = (gamma / d2).powi(2);
        let big_d = carlson_rd(0.0, 1.0 - m, 1.0)? / 3.0;
        Ok(2.0 * gamma * gamma / d2 * (ellip_k(m)? - big_d))
    } else if gamma == d2 {
        // Lemniscate: the K(1) term carries a vanishing cofactor.
        Ok(2.0 * d2)
    } else {
        Ok(2.0 * gamma * ellip_e((d2 / gamma).powi(2))?)
    }
}

/// Area of the ellipse `{x : ‖x − x_s‖ + ‖x − x_d‖ ≤ γ}` (zero below `2d`).
pub(crate) fn ellipse_area(gamma: f64, d: f64) -> f64 {
    if gamma <= 2.0 * d {
        0.0
    } else {
        PI * gamma * ((gamma - 2.0 * d) * (gamma + 2.0 * d)).sqrt() / 4.0
    }
}

fn check_nonnegative(func: &'static str, gamma: f64) -> Result<()> {
    if gamma >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            func,
            value: gamma,
            reason: "must be non-negative",
        })
    }
}

/// CDF of the smallest distance product `Υ_opt`.
pub fn cdf_upsilon_opt(gamma: f64, dist: &DistCdf) -> Result<f64> {
    check_nonnegative("cdf_upsilon_opt", gamma)?;
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    Ok(-(-xi_pow(gamma, dist)?).exp_m1())
}

/// Density of `Υ_opt`.
pub fn pdf_upsilon_opt(gamma: f64, dist: &DistCdf) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain {
            func: "pdf_upsilon_opt",
            value: gamma,
            reason: "must be positive",
        });
    }
    let d2 = dist.d * dist.d;
    let lambda = dist.intensity;
    let area_rate = if gamma < d2 {
        2.0 * gamma / d2 * ellip_k((gamma / d2).powi(2))?
    } else if gamma > d2 {
        2.0 * ellip_k((d2 / gamma).powi(2))?
    } else {
        return Err(Error::Singularity {
            func: "pdf_upsilon_opt",
            value: gamma,
        });
    };
    Ok(lambda * area_rate * (-xi_pow(gamma, dist)?).exp())
}

/// CDF of the smallest distance sum `Λ_opt`.
pub fn cdf_lambda_opt(gamma: f64, dist: &DistCdf) -> Result<f64> {
    check_nonnegative("cdf_lambda_opt", gamma)?;
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    Ok(-(-xi_exp(gamma, dist)?).exp_m1())
}

/// Density of `Λ_opt`; integrable `1/√` singularity at `γ = 2d`.
pub fn pdf_lambda_opt(gamma: f64, dist: &DistCdf) -> Result<f64> {
    check_nonnegative("pdf_lambda_opt", gamma)?;
    let d = dist.d;
    if gamma < 2.0 * d {
        return Ok(0.0);
    }
    if gamma == 2.0 * d {
        return Err(Error::Singularity {
            func: "pdf_lambda_opt",
            value: gamma,
        });
    }
    let root = ((gamma - 2.0 * d) * (gamma + 2.0 * d)).sqrt();
    let lambda = dist.intensity;
    Ok(PI * lambda * (gamma * gamma - 2.0 * d * d) / (2.0 * root) * (-xi_exp(gamma, dist)?).exp())
}

/// Mean number of nodes with distance product at most `t`.
pub fn xi_pow(t: f64, dist: &DistCdf) -> Result<f64> {
    check_nonnegative("xi_pow", t)?;
    Ok(dist.intensity * cassini_area(t, dist.d)?)
}

/// Mean number of nodes with distance sum at most `t`.
pub fn xi_exp(t: f64, dist: &DistCdf) -> Result<f64> {
    check_nonnegative("xi_exp", t)?;
    Ok(dist.intensity * ellipse_area(t, dist.d))
}

/// Smallest score `γ` with `F(γ) ≥ p`, for `p ∈ (0, 1)`.
pub fn optimum_score_quantile(dist: &DistCdf, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("quantile level {p} must be in (0, 1)")));
    }
    // Void probability 1 − p = exp(−λ·area).
    let target = -(-p).ln_1p() / dist.intensity;
    let d = dist.d;
    match dist.model {
        ScoreModel::MinSum => {
            // γ²(γ² − 4d²) = (4·area/π)²
            let c = (4.0 * target / PI).powi(2);
            Ok((2.0 * d * d + (4.0 * d.powi(4) + c).sqrt()).sqrt())
        }
        ScoreModel::MinProduct => {
            let (mut lo, mut hi) = (0.0, d * d);
            while cassini_area(hi, d)? < target {
                lo = hi;
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if cassini_area(mid, d)? < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(hi)
        }
    }
}

/// CDF of the distance product of one node uniform on the right half-disc of
/// radius `tau`.
///
/// Only the regimes where the level set is either contained in the half-disc
/// (`γ ≤ τ² − d²`) or contains it (`γ > τ² + d²`) have a closed form here; the
/// region in between is reported as unsupported.
pub fn lemma1_cdf(gamma: f64, tau: f64, d: f64) -> Result<f64> {
    check_nonnegative("lemma1_cdf", gamma)?;
    if !(tau > 0.0 && d > 0.0) {
        return Err(invalid(format!("tau = {tau} and d = {d} must be positive")));
    }
    let d2 = d * d;
    let t2 = tau * tau;
    if gamma > t2 + d2 {
        return Ok(1.0);
    }
    if gamma > t2 - d2 {
        return Err(Error::UnsupportedRegion {
            gamma,
            lower: (t2 - d2).max(0.0),
            upper: t2 + d2,
        });
    }
    // Half of the Cassini area over the half-disc area.
    Ok(cassini_area(gamma, d)? / (PI * t2))
}

/// CDF of the distance sum of one node uniform on the disc of radius `tau`.
///
/// Closed form while the ellipse fits in the disc (`γ ≤ 2τ`) and once it
/// covers the disc (`γ ≥ 2√(τ² + d²)`); unsupported in between.
pub fn uniform_sum_cdf(gamma: f64, tau: f64, d: f64) -> Result<f64> {
    check_nonnegative("uniform_sum_cdf", gamma)?;
    if !(tau > d && d > 0.0) {
        return Err(invalid(format!("need tau = {tau} > d = {d} > 0")));
    }
    let outer = 2.0 * (tau * tau + d * d).sqrt();
    if gamma >= outer {
        return Ok(1.0);
    }
    if gamma > 2.0 * tau {
        return Err(Error::UnsupportedRegion {
            gamma,
            lower: 2.0 * tau,
            upper: outer,
        });
    }
    Ok(ellipse_area(gamma, d) / (PI * tau * tau))
}
