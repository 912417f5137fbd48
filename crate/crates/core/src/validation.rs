//! Invariant suite cross-checking the analytic formulas against each other and
//! against simulation.

use std::fmt::Write as _;

use crate::analytic::{
    self, cdf_lambda_opt, cdf_upsilon_opt, pdf_lambda_opt, pdf_upsilon_opt, rate_fading_closed, rate_fading_quad,
    rate_fading_ub, xi_exp, xi_pow, DistCdf, RateQuadrature, ScoreModel,
};
use crate::channel::{NetworkConfig, PathLossModel};
use crate::error::{Error, Result};
use crate::montecarlo::{self, mc_distance_dist, mc_feedback_dist, mc_gamma_ks, mc_outage, snr_dominance_violations};
use crate::policies::{PolicyKind, SelectionPolicy};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Knobs for the simulation-backed checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    /// Feedback threshold used for the Poisson checks (applied to both functionals).
    pub threshold: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            trials: 20_000,
            seed: 1,
            threshold: 20.0,
        }
    }
}

fn check(name: &'static str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn central_difference(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let d1 = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let d2 = (f(x + h / 2.0)? - f(x - h / 2.0)?) / h;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Runs every check for the scenario in `cfg` (its model field is ignored;
/// both path-loss models are exercised).
pub fn run_suite(cfg: &NetworkConfig, opts: &SuiteOptions) -> Vec<Check> {
    let pow_cfg = cfg.with_model(PathLossModel::PowerLaw);
    let exp_cfg = cfg.with_model(PathLossModel::ExpLaw);
    let mut checks = Vec::new();
    if let Err(e) = pow_cfg.validate().and(exp_cfg.validate()) {
        checks.push(Check {
            name: "configuration",
            passed: false,
            detail: e.to_string(),
        });
        return checks;
    }
    let pow = DistCdf::new(ScoreModel::MinProduct, cfg.intensity, cfg.d);
    let sum = DistCdf::new(ScoreModel::MinSum, cfg.intensity, cfg.d);
    let (pow, sum) = match (pow, sum) {
        (Ok(p), Ok(s)) => (p, s),
        (Err(e), _) | (_, Err(e)) => {
            checks.push(check("configuration", Err(e)));
            return checks;
        }
    };
    let d2 = cfg.d * cfg.d;

    checks.push(check(
        "void identity (min-product)",
        (|| {
            let mut worst: f64 = 0.0;
            for i in 1..=50 {
                let t = 4.0 * d2 * i as f64 / 50.0;
                worst = worst.max(((1.0 - cdf_upsilon_opt(t, &pow)?) - (-xi_pow(t, &pow)?).exp()).abs());
            }
            Ok((worst <= 1e-10, format!("max deviation {worst:.3e}")))
        })(),
    ));
    checks.push(check(
        "void identity (min-sum)",
        (|| {
            let mut worst: f64 = 0.0;
            for i in 1..=50 {
                let t = 4.0 * cfg.d * i as f64 / 50.0;
                worst = worst.max(((1.0 - cdf_lambda_opt(t, &sum)?) - (-xi_exp(t, &sum)?).exp()).abs());
            }
            Ok((worst <= 1e-10, format!("max deviation {worst:.3e}")))
        })(),
    ));
    checks.push(check(
        "densities match finite differences",
        (|| {
            let mut worst: f64 = 0.0;
            for x in [0.3, 0.8, 1.3, 1.7, 3.0] {
                let g = x * d2;
                let fd = central_difference(|v| xi_pow(v, &pow).map(|a| -(-a).exp()), g, g * 1e-3)?;
                worst = worst.max((pdf_upsilon_opt(g, &pow)? / fd - 1.0).abs());
            }
            for x in [1.05, 1.3, 2.0] {
                let g = 2.0 * cfg.d * x;
                let h = (g - 2.0 * cfg.d).min(g) * 1e-3;
                let fd = central_difference(|v| xi_exp(v, &sum).map(|a| -(-a).exp()), g, h)?;
                worst = worst.max((pdf_lambda_opt(g, &sum)? / fd - 1.0).abs());
            }
            Ok((worst <= 1e-6, format!("max relative error {worst:.3e}")))
        })(),
    ));
    checks.push(check(
        "closed-form rate matches quadrature",
        (|| {
            let q = RateQuadrature::default();
            let mut worst: f64 = 0.0;
            let mut declined = 0;
            for n in [1u32, 8, 16, 32] {
                let c = NetworkConfig {
                    n_elements: n,
                    avg_snr: 1.0,
                    ..pow_cfg
                };
                for e in -2..=4 {
                    let y = 10f64.powi(e);
                    match rate_fading_closed(y, &c) {
                        Ok(v) => {
                            let reference = rate_fading_quad(y, &c, &q)?;
                            worst = worst.max((v / reference - 1.0).abs());
                        }
                        Err(Error::IllConditioned { .. }) => declined += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok((
                worst <= 1e-4,
                format!("max relative error {worst:.3e}; {declined} ill-conditioned points delegated"),
            ))
        })(),
    ));
    checks.push(check(
        "Jensen bound dominates",
        (|| {
            let q = RateQuadrature::default();
            let mut violations = 0;
            for e in -3..=4 {
                let y = 10f64.powi(e) / cfg.avg_snr.max(1e-12);
                if rate_fading_ub(y, &pow_cfg)? < rate_fading_quad(y, &pow_cfg, &q)? {
                    violations += 1;
                }
            }
            Ok((violations == 0, format!("{violations} violations")))
        })(),
    ));
    for (name, c) in [
        ("optimum dominates baselines (power law)", pow_cfg),
        ("optimum dominates baselines (exp law)", exp_cfg),
    ] {
        checks.push(check(
            name,
            snr_dominance_violations(&c, opts.trials, opts.seed).map(|v| (v == 0, format!("{v} violations"))),
        ));
    }
    for (name, c) in [
        ("outage vs simulation (power law)", pow_cfg),
        ("outage vs simulation (exp law)", exp_cfg),
    ] {
        checks.push(check(
            name,
            (|| {
                let exact = analytic::outage(&c)?;
                let policy = SelectionPolicy::new(PolicyKind::optimum_for(c.model));
                let est = mc_outage(&c, &policy, opts.trials, opts.seed)?;
                Ok((
                    est.within(exact, 3.0),
                    format!("analytic {exact:.5}, simulated {:.5} ± {:.5}", est.mean, est.std_error),
                ))
            })(),
        ));
    }
    for (name, kind, dist) in [
        (
            "distance CDF within DKW band (min-product)",
            PolicyKind::OptProduct,
            pow,
        ),
        ("distance CDF within DKW band (min-sum)", PolicyKind::OptSum, sum),
    ] {
        checks.push(check(
            name,
            (|| {
                let emp = mc_distance_dist(cfg, kind, opts.trials, opts.seed)?;
                let band = emp.dkw_epsilon(0.99);
                let lo = analytic::optimum_score_quantile(&dist, 0.01)?;
                let hi = analytic::optimum_score_quantile(&dist, 0.99)?;
                let mut worst: f64 = 0.0;
                for i in 0..20 {
                    let g = lo + (hi - lo) * i as f64 / 19.0;
                    worst = worst.max((emp.cdf(g) - dist.cdf(g)?).abs());
                }
                Ok((worst <= band, format!("max deviation {worst:.4} vs band {band:.4}")))
            })(),
        ));
    }
    for (name, model, xi) in [
        (
            "feedback count is Poisson (power law)",
            PathLossModel::PowerLaw,
            xi_pow(opts.threshold, &pow),
        ),
        (
            "feedback count is Poisson (exp law)",
            PathLossModel::ExpLaw,
            xi_exp(opts.threshold, &sum),
        ),
    ] {
        checks.push(check(
            name,
            (|| {
                let xi = xi?;
                let trials = opts.trials.min(10_000);
                let h = mc_feedback_dist(cfg, model, opts.threshold, trials, opts.seed, None)?;
                let mean = h.mean_estimate();
                if xi == 0.0 {
                    return Ok((h.max_count() == 0, "no node can feed back".to_string()));
                }
                let gof = h.poisson_gof(xi)?;
                let mut detail = String::new();
                let _ = write!(
                    detail,
                    "mean {:.3} ± {:.3} vs {xi:.3}; chi2 {:.1} on {} dof, p = {:.3}",
                    mean.mean, mean.std_error, gof.statistic, gof.dof, gof.p_value
                );
                Ok((mean.within(xi, 3.0) && gof.p_value > 0.01, detail))
            })(),
        ));
    }
    checks.push(check(
        "gamma approximation KS distance",
        (|| {
            let ks = mc_gamma_ks(cfg.n_elements, opts.trials.max(montecarlo::BLOCK_SIZE), opts.seed)?;
            Ok((ks <= 0.02, format!("KS distance {ks:.4}")))
        })(),
    ));
    checks
}
