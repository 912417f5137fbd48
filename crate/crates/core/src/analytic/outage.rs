use super::{cdf_lambda_opt, cdf_upsilon_opt, xi_exp, xi_pow, DistCdf};
use crate::channel::{NetworkConfig, PathLossModel};
use crate::error::{invalid, Result};

fn check_model(cfg: &NetworkConfig, model: PathLossModel) -> Result<DistCdf> {
    cfg.validate()?;
    if cfg.model != model {
        return Err(invalid(format!(
            "expected a {model:?} configuration, got {:?}",
            cfg.model
        )));
    }
    DistCdf::from_config(cfg)
}

fn check_threshold(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("feedback threshold {t} must be positive")))
    }
}

/// Largest distance product that still meets the SNR target.
fn product_threshold(cfg: &NetworkConfig) -> f64 {
    (cfg.snr_numerator() / cfg.target_snr).powf(1.0 / cfg.eta)
}

/// Largest distance sum that still meets the SNR target; `None` if even a
/// zero-length path falls short.
fn sum_threshold(cfg: &NetworkConfig) -> Option<f64> {
    let ratio = cfg.snr_numerator() / cfg.target_snr;
    (ratio > 1.0).then(|| ratio.ln() / cfg.alpha)
}

/// Outage of the min-product rule under power-law path loss.
pub fn outage_pow(cfg: &NetworkConfig) -> Result<f64> {
    let dist = check_model(cfg, PathLossModel::PowerLaw)?;
    Ok(1.0 - cdf_upsilon_opt(product_threshold(cfg), &dist)?)
}

/// Outage of the min-sum rule under exp-law path loss.
pub fn outage_exp(cfg: &NetworkConfig) -> Result<f64> {
    let dist = check_model(cfg, PathLossModel::ExpLaw)?;
    match sum_threshold(cfg) {
        Some(level) => Ok(1.0 - cdf_lambda_opt(level, &dist)?),
        None => Ok(1.0),
    }
}

/// Outage of the optimum rule for whichever model `cfg` uses.
pub fn outage(cfg: &NetworkConfig) -> Result<f64> {
    match cfg.model {
        PathLossModel::PowerLaw => outage_pow(cfg),
        PathLossModel::ExpLaw => outage_exp(cfg),
    }
}

/// Outage of the min-product rule when only nodes with product at most `t`
/// feed back.
pub fn outage_pow_fb(cfg: &NetworkConfig, t: f64) -> Result<f64> {
    let dist = check_model(cfg, PathLossModel::PowerLaw)?;
    check_threshold(t)?;
    if t.is_infinite() {
        return outage_pow(cfg);
    }
    if cfg.target_snr <= cfg.snr_numerator() / t.powf(cfg.eta) {
        // Every fed-back node meets the target: outage iff nobody feeds back.
        Ok((-xi_pow(t, &dist)?).exp())
    } else {
        outage_pow(cfg)
    }
}

/// Outage of the min-sum rule when only nodes with sum at most `t` feed back.
pub fn outage_exp_fb(cfg: &NetworkConfig, t: f64) -> Result<f64> {
    let dist = check_model(cfg, PathLossModel::ExpLaw)?;
    check_threshold(t)?;
    if t.is_infinite() {
        return outage_exp(cfg);
    }
    let num = cfg.snr_numerator();
    if cfg.target_snr >= num / (2.0 * cfg.alpha * cfg.d).exp() {
        Ok(1.0)
    } else if cfg.target_snr <= num / (cfg.alpha * t).exp() {
        Ok((-xi_exp(t, &dist)?).exp())
    } else {
        outage_exp(cfg)
    }
}

/// Limited-feedback outage for whichever model `cfg` uses.
pub fn outage_fb(cfg: &NetworkConfig, t: f64) -> Result<f64> {
    match cfg.model {
        PathLossModel::PowerLaw => outage_pow_fb(cfg, t),
        PathLossModel::ExpLaw => outage_exp_fb(cfg, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ez2;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pow_cfg(avg_snr: f64) -> NetworkConfig {
        NetworkConfig {
            avg_snr,
            ..NetworkConfig::default()
        }
    }

    fn exp_cfg(avg_snr: f64) -> NetworkConfig {
        pow_cfg(avg_snr).with_model(PathLossModel::ExpLaw)
    }

    #[test]
    fn limits() {
        assert_relative_eq!(outage_pow(&pow_cfg(1e12)).unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(outage_pow(&pow_cfg(0.0)).unwrap(), 1.0);
        assert_relative_eq!(outage_exp(&exp_cfg(1e30)).unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(outage_exp(&exp_cfg(1e-3)).unwrap(), 1.0);
        let tiny_target = NetworkConfig {
            target_snr: 1e-30,
            ..pow_cfg(1.0)
        };
        assert_relative_eq!(outage_pow(&tiny_target).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn matches_threshold_formula() {
        let cfg = pow_cfg(1.0);
        let dist = DistCdf::from_config(&cfg).unwrap();
        let level = (ez2(16) / 10f64.powf(0.5)).powf(0.25);
        let expected = 1.0 - cdf_upsilon_opt(level, &dist).unwrap();
        assert_relative_eq!(outage_pow(&cfg).unwrap(), expected, max_relative = 1e-14);
        assert!(outage_pow(&exp_cfg(1.0)).is_err());
    }

    #[test]
    fn exp_third_branch() {
        // ρ at exactly γ̄E[Z²]/e^{2αd} and above: outage 1.
        let cfg = exp_cfg(1.0);
        let edge = NetworkConfig {
            target_snr: cfg.snr_numerator() / (2.0 * cfg.alpha * cfg.d).exp(),
            ..cfg
        };
        assert_eq!(outage_exp_fb(&edge, 5.0).unwrap(), 1.0);
        assert_relative_eq!(outage_exp(&edge).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn feedback_plateaus() {
        let t = 3.0;
        let cfg = pow_cfg(1e4);
        let dist = DistCdf::from_config(&cfg).unwrap();
        let plateau = (-xi_pow(t, &dist).unwrap()).exp();
        assert_relative_eq!(outage_pow_fb(&cfg, t).unwrap(), plateau, max_relative = 1e-14);
        assert_relative_eq!(outage_pow_fb(&pow_cfg(1e6), t).unwrap(), plateau, max_relative = 1e-14);
        // Branch point continuity.
        let at = NetworkConfig {
            avg_snr: cfg.target_snr * t.powf(cfg.eta) / ez2(16),
            ..cfg
        };
        assert_relative_eq!(outage_pow(&at).unwrap(), plateau, max_relative = 1e-9);

        let cfg = exp_cfg(1e6);
        let dist = DistCdf::from_config(&cfg).unwrap();
        let plateau = (-xi_exp(5.0, &dist).unwrap()).exp();
        assert_relative_eq!(outage_exp_fb(&cfg, 5.0).unwrap(), plateau, max_relative = 1e-14);
        assert_eq!(outage_exp_fb(&cfg, 2.0).unwrap(), 1.0);
        assert_eq!(outage_exp_fb(&cfg, f64::INFINITY).unwrap(), outage_exp(&cfg).unwrap());
    }

    #[test]
    fn middle_branch_is_all_feedback() {
        let cfg = exp_cfg(10.0);
        let level = (cfg.snr_numerator() / cfg.target_snr).ln() / cfg.alpha;
        assert!(level > 2.4);
        assert_eq!(outage_exp_fb(&cfg, level + 1.0).unwrap(), outage_exp(&cfg).unwrap());
    }

    proptest! {
        #[test]
        fn feedback_outage_monotone(t1 in 0.1f64..30.0, t2 in 0.1f64..30.0, snr_db in -10.0f64..40.0) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let snr = 10f64.powf(snr_db / 10.0);
            for cfg in [pow_cfg(snr), exp_cfg(snr)] {
                let a = outage_fb(&cfg, lo).unwrap();
                let b = outage_fb(&cfg, hi).unwrap();
                prop_assert!(b <= a + 1e-15);
                prop_assert!(outage(&cfg).unwrap() <= b + 1e-15);
            }
        }

        #[test]
        fn outage_decreasing_in_snr(a in -10.0f64..40.0, b in -10.0f64..40.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            for model in [PathLossModel::PowerLaw, PathLossModel::ExpLaw] {
                let c1 = pow_cfg(10f64.powf(lo / 10.0)).with_model(model);
                let c2 = pow_cfg(10f64.powf(hi / 10.0)).with_model(model);
                prop_assert!(outage(&c2).unwrap() <= outage(&c1).unwrap());
            }
        }
    }
}
