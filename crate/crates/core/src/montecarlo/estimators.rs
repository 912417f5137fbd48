use statrs::distribution::{ContinuousCDF, Gamma};

use super::run_blocks;
use super::stats::{Accumulator, CountHistogram, EmpiricalDist, Estimate};
use crate::analytic::{DistCdf, ScoreModel};
use crate::channel::{gamma_params, mean_snr, sample_z, NetworkConfig, PathLossModel};
use crate::error::{invalid, Error, Result};
use crate::geometry::{covering_radius, sample_ppp, window_radius, AnchorPair, Point2};
use crate::policies::{feedback_count, PolicyKind, SelectionPolicy};

/// Probability that the optimum node falls outside the simulation window.
pub const WINDOW_EPSILON: f64 = 1e-6;

const MIN_TRIALS: usize = 1000;

fn check_trials(n_trials: usize) -> Result<()> {
    if n_trials < MIN_TRIALS {
        Err(invalid(format!(
            "n_trials = {n_trials} below the minimum of {MIN_TRIALS}"
        )))
    } else {
        Ok(())
    }
}

/// Common geometry of a set of configurations; all must share `d` and the intensity.
fn shared_geometry(cfgs: &[NetworkConfig]) -> Result<(f64, f64)> {
    let first = cfgs
        .first()
        .ok_or_else(|| invalid("at least one configuration is required"))?;
    for cfg in cfgs {
        cfg.validate()?;
        if cfg.d != first.d || cfg.intensity != first.intensity {
            return Err(invalid(
                "configurations sharing realizations must agree on d and intensity",
            ));
        }
    }
    Ok((first.d, first.intensity))
}

/// Window radius for simulating `policies` under every configuration in `cfgs`.
///
/// The optimum node lies inside with probability at least `1 − WINDOW_EPSILON`.
/// Any other rule picks a node whose score bound places it within `2d` of the
/// optimum's covering radius, so the window grows by `2d` when such rules are present.
pub fn simulation_window(cfgs: &[NetworkConfig], policies: &[SelectionPolicy]) -> Result<f64> {
    shared_geometry(cfgs)?;
    let mut radius: f64 = 0.0;
    for cfg in cfgs {
        let dist = DistCdf::from_config(cfg)?;
        let mut r = window_radius(&dist, WINDOW_EPSILON, None)?;
        let optimum = PolicyKind::optimum_for(cfg.model);
        if policies.iter().any(|p| p.kind() != optimum) {
            r += 2.0 * cfg.d;
        }
        radius = radius.max(r);
    }
    Ok(radius)
}

/// `G(a)·G(b)` for a node at link distances `a`, `b`.
fn pathloss(cfg: &NetworkConfig, p: &Point2, anchors: &AnchorPair) -> f64 {
    let (a, b) = anchors.distances(p);
    match cfg.model {
        PathLossModel::PowerLaw => cfg.pathloss_product(a * b),
        PathLossModel::ExpLaw => cfg.pathloss_product(a + b),
    }
}

/// Outage estimates on shared realizations: `result[c][p]` is configuration
/// `c` under policy `p`. An empty selection counts as an outage.
pub fn mc_outage_sweep(
    cfgs: &[NetworkConfig],
    policies: &[SelectionPolicy],
    n_trials: usize,
    seed: u64,
) -> Result<Vec<Vec<Estimate>>> {
    check_trials(n_trials)?;
    let (d, intensity) = shared_geometry(cfgs)?;
    let window = simulation_window(cfgs, policies)?;
    let anchors = AnchorPair::new(d)?;
    let blocks = run_blocks(n_trials, seed, |rng, count| -> Result<Vec<Accumulator>> {
        let mut accs = vec![Accumulator::default(); cfgs.len() * policies.len()];
        for _ in 0..count {
            let r = sample_ppp(intensity, window, rng)?;
            for (pi, policy) in policies.iter().enumerate() {
                let chosen = policy.select_index(&r, &anchors).map(|i| r.points()[i]);
                for (ci, cfg) in cfgs.iter().enumerate() {
                    let outage = match chosen {
                        None => true,
                        Some(p) => mean_snr(cfg, pathloss(cfg, &p, &anchors)) <= cfg.target_snr,
                    };
                    accs[ci * policies.len() + pi].push(if outage { 1.0 } else { 0.0 });
                }
            }
        }
        Ok(accs)
    });
    merge_grid(blocks, cfgs.len(), policies.len())
}

fn merge_grid(blocks: Vec<Result<Vec<Accumulator>>>, rows: usize, cols: usize) -> Result<Vec<Vec<Estimate>>> {
    let mut total = vec![Accumulator::default(); rows * cols];
    for block in blocks {
        for (t, b) in total.iter_mut().zip(block?.iter()) {
            t.merge(b);
        }
    }
    Ok(total
        .chunks(cols)
        .map(|row| row.iter().map(Accumulator::estimate).collect())
        .collect())
}

/// Fraction of realizations whose fading-averaged SNR under `policy` is at most the target.
pub fn mc_outage(cfg: &NetworkConfig, policy: &SelectionPolicy, n_trials: usize, seed: u64) -> Result<Estimate> {
    Ok(mc_outage_sweep(std::slice::from_ref(cfg), std::slice::from_ref(policy), n_trials, seed)?[0][0])
}

/// Average-rate estimates on shared realizations and shared fading draws:
/// `result[c][p]` is configuration `c` under policy `p`. Each trial averages
/// `log₂(1 + γ̄·Y·Z²)` over `fading_draws` exact draws of `Z`; an empty selection
/// contributes zero. All configurations must share `n_elements`.
pub fn mc_rate_sweep(
    cfgs: &[NetworkConfig],
    policies: &[SelectionPolicy],
    n_trials: usize,
    fading_draws: usize,
    seed: u64,
) -> Result<Vec<Vec<Estimate>>> {
    check_trials(n_trials)?;
    if fading_draws == 0 {
        return Err(invalid("fading_draws must be at least 1"));
    }
    let (d, intensity) = shared_geometry(cfgs)?;
    let n_elements = cfgs[0].n_elements;
    if cfgs.iter().any(|c| c.n_elements != n_elements) {
        return Err(invalid("configurations sharing fading draws must agree on n_elements"));
    }
    let window = simulation_window(cfgs, policies)?;
    let anchors = AnchorPair::new(d)?;
    let blocks = run_blocks(n_trials, seed, |rng, count| -> Result<Vec<Accumulator>> {
        let mut accs = vec![Accumulator::default(); cfgs.len() * policies.len()];
        let mut z_sq = vec![0.0; fading_draws];
        for _ in 0..count {
            let r = sample_ppp(intensity, window, rng)?;
            for z in z_sq.iter_mut() {
                *z = sample_z(n_elements, rng).powi(2);
            }
            for (pi, policy) in policies.iter().enumerate() {
                let chosen = policy.select_index(&r, &anchors).map(|i| r.points()[i]);
                for (ci, cfg) in cfgs.iter().enumerate() {
                    let rate = match chosen {
                        None => 0.0,
                        Some(p) => {
                            let snr_per_z = cfg.avg_snr / pathloss(cfg, &p, &anchors);
                            z_sq.iter().map(|z| (snr_per_z * z).ln_1p()).sum::<f64>()
                                / (fading_draws as f64 * std::f64::consts::LN_2)
                        }
                    };
                    accs[ci * policies.len() + pi].push(rate);
                }
            }
        }
        Ok(accs)
    });
    merge_grid(blocks, cfgs.len(), policies.len())
}

/// Joint average over PPP realizations and fading of `log₂(1 + γ̄·Y·Z²)`.
pub fn mc_rate(
    cfg: &NetworkConfig,
    policy: &SelectionPolicy,
    n_trials: usize,
    fading_draws: usize,
    seed: u64,
) -> Result<Estimate> {
    Ok(mc_rate_sweep(
        std::slice::from_ref(cfg),
        std::slice::from_ref(policy),
        n_trials,
        fading_draws,
        seed,
    )?[0][0])
}

/// Samples of the optimum score (`Υ_opt` for [`PolicyKind::OptProduct`], `Λ_opt`
/// for [`PolicyKind::OptSum`]); empty realizations give `+∞`.
pub fn mc_distance_dist(cfg: &NetworkConfig, kind: PolicyKind, n_trials: usize, seed: u64) -> Result<EmpiricalDist> {
    check_trials(n_trials)?;
    let model = match kind {
        PolicyKind::OptProduct => ScoreModel::MinProduct,
        PolicyKind::OptSum => ScoreModel::MinSum,
        other => return Err(invalid(format!("no optimum-score distribution for {}", other.name()))),
    };
    let dist = DistCdf::new(model, cfg.intensity, cfg.d)?;
    let window = window_radius(&dist, WINDOW_EPSILON, None)?;
    let anchors = AnchorPair::new(cfg.d)?;
    let blocks = run_blocks(n_trials, seed, |rng, count| -> Result<Vec<f64>> {
        (0..count)
            .map(|_| {
                let r = sample_ppp(cfg.intensity, window, rng)?;
                Ok(r.points()
                    .iter()
                    .map(|p| kind.score(p, &anchors))
                    .fold(f64::INFINITY, f64::min))
            })
            .collect()
    });
    let mut samples = Vec::with_capacity(n_trials);
    for block in blocks {
        samples.extend(block?);
    }
    EmpiricalDist::new(samples)
}

/// Distribution of the number of nodes with score at most `t` under `model`'s
/// functional. `window` defaults to the smallest disc covering that region;
/// a smaller window is rejected.
pub fn mc_feedback_dist(
    cfg: &NetworkConfig,
    model: PathLossModel,
    t: f64,
    n_trials: usize,
    seed: u64,
    window: Option<f64>,
) -> Result<CountHistogram> {
    check_trials(n_trials)?;
    cfg.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("feedback threshold {t} must be positive and finite")));
    }
    let required = covering_radius(model.into(), t, cfg.d);
    let window = match window {
        Some(w) if w < required => return Err(Error::WindowTooSmall { window: w, required }),
        Some(w) => w,
        None => required.max(cfg.d),
    };
    let anchors = AnchorPair::new(cfg.d)?;
    let blocks = run_blocks(n_trials, seed, |rng, count| -> Result<CountHistogram> {
        let mut h = CountHistogram::default();
        for _ in 0..count {
            let r = sample_ppp(cfg.intensity, window, rng)?;
            h.push(feedback_count(&r, &anchors, model, t));
        }
        Ok(h)
    });
    let mut total = CountHistogram::default();
    for block in blocks {
        total.merge(&block?);
    }
    Ok(total)
}

/// Number of realizations in which some baseline rule achieves a strictly
/// higher fading-averaged SNR than the optimum rule for `cfg.model`.
pub fn snr_dominance_violations(cfg: &NetworkConfig, n_trials: usize, seed: u64) -> Result<usize> {
    check_trials(n_trials)?;
    let policies: Vec<SelectionPolicy> = PolicyKind::ALL.iter().map(|&k| SelectionPolicy::new(k)).collect();
    let window = simulation_window(std::slice::from_ref(cfg), &policies)?;
    let anchors = AnchorPair::new(cfg.d)?;
    let optimum = SelectionPolicy::new(PolicyKind::optimum_for(cfg.model));
    let snr = |policy: &SelectionPolicy, r: &crate::geometry::Realization| {
        policy
            .select_index(r, &anchors)
            .map_or(0.0, |i| mean_snr(cfg, pathloss(cfg, &r.points()[i], &anchors)))
    };
    let blocks = run_blocks(n_trials, seed, |rng, count| -> Result<usize> {
        let mut violations = 0;
        for _ in 0..count {
            let r = sample_ppp(cfg.intensity, window, rng)?;
            let best = snr(&optimum, &r);
            if policies.iter().any(|p| snr(p, &r) > best) {
                violations += 1;
            }
        }
        Ok(violations)
    });
    blocks.into_iter().sum()
}

/// Kolmogorov–Smirnov distance between `draws` exact samples of `Z` and its
/// moment-matched gamma approximation.
pub fn mc_gamma_ks(n_elements: u32, draws: usize, seed: u64) -> Result<f64> {
    check_trials(draws)?;
    let gp = gamma_params(n_elements);
    let gamma = Gamma::new(gp.k, 1.0 / gp.theta).map_err(|e| invalid(e.to_string()))?;
    let blocks = run_blocks(draws, seed, |rng, count| {
        (0..count).map(|_| sample_z(n_elements, rng)).collect::<Vec<_>>()
    });
    let sample = EmpiricalDist::new(blocks.concat())?;
    Ok(sample.ks_distance(|x| gamma.cdf(x)))
}
