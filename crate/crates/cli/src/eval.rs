//! Runs an experiment spec and collects one row per
//! (sweep point × policy × method × metric).

use std::collections::HashMap;

use ris_core::analytic::{self, xi_exp, xi_pow, DistCdf, RateKernel, RateQuadrature, ScoreModel};
use ris_core::montecarlo::{self, Estimate};
use ris_core::{NetworkConfig, PathLossModel, PolicyKind, SelectionPolicy};

use crate::spec::{ExperimentSpec, Method, Metric, Scenario};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sweep_var: f64,
    pub policy: &'static str,
    pub method: Method,
    pub metric: Metric,
    pub value: f64,
    /// Absent for analytic rows.
    pub std_error: Option<f64>,
}

type Cell = (f64, Option<f64>);
type Key = (usize, usize, Method, Metric);

fn selection(kind: PolicyKind, threshold: Option<f64>) -> Result<SelectionPolicy, CliError> {
    match (kind, threshold) {
        (PolicyKind::OptProduct | PolicyKind::OptSum, Some(t)) => Ok(SelectionPolicy::with_feedback(kind, t)?),
        _ => Ok(SelectionPolicy::new(kind)),
    }
}

/// Functional whose sublevel set defines the feedback load of an optimum rule.
fn feedback_functional(kind: PolicyKind) -> Option<(ScoreModel, PathLossModel)> {
    match kind {
        PolicyKind::OptProduct => Some((ScoreModel::MinProduct, PathLossModel::PowerLaw)),
        PolicyKind::OptSum => Some((ScoreModel::MinSum, PathLossModel::ExpLaw)),
        _ => None,
    }
}

fn analytic_cell(metric: Metric, s: &Scenario, kind: PolicyKind, q: &RateQuadrature) -> Result<Option<f64>, CliError> {
    let cfg = s.network();
    let optimum = kind == PolicyKind::optimum_for(cfg.model);
    let value = match metric {
        Metric::Outage if optimum => Some(match s.threshold {
            Some(t) => analytic::outage_fb(&cfg, t)?,
            None => analytic::outage(&cfg)?,
        }),
        Metric::Rate if optimum => Some(analytic::rate(&cfg, q, s.threshold, RateKernel::Exact)?),
        Metric::RateBound if optimum => Some(analytic::rate(&cfg, q, s.threshold, RateKernel::JensenBound)?),
        Metric::FeedbackMean => match (feedback_functional(kind), s.threshold) {
            (Some((model, _)), Some(t)) => {
                let dist = DistCdf::new(model, cfg.intensity, cfg.d)?;
                Some(match model {
                    ScoreModel::MinProduct => xi_pow(t, &dist)?,
                    ScoreModel::MinSum => xi_exp(t, &dist)?,
                })
            }
            _ => None,
        },
        _ => None,
    };
    Ok(value)
}

/// Simulates `metric` for every (point, policy), sharing realizations across
/// points when the sweep allows it.
fn montecarlo_cells(
    spec: &ExperimentSpec,
    metric: Metric,
    points: &[(f64, Scenario)],
    kinds: &[PolicyKind],
    cells: &mut HashMap<Key, Cell>,
) -> Result<(), CliError> {
    let run = &spec.run;
    let sweep = |cfgs: &[NetworkConfig], policies: &[SelectionPolicy]| -> Result<Vec<Vec<Estimate>>, CliError> {
        Ok(match metric {
            Metric::Outage => montecarlo::mc_outage_sweep(cfgs, policies, run.trials, run.seed)?,
            _ => montecarlo::mc_rate_sweep(cfgs, policies, run.trials, run.fading_draws, run.seed)?,
        })
    };
    let mut store = |pi: usize, ki: usize, e: &Estimate| {
        cells.insert((pi, ki, Method::Montecarlo, metric), (e.mean, Some(e.std_error)));
    };
    match metric {
        Metric::Outage | Metric::Rate => {
            let policy_at = |s: &Scenario| -> Result<Vec<SelectionPolicy>, CliError> {
                kinds.iter().map(|&k| selection(k, s.threshold)).collect()
            };
            if spec.shares_realizations(metric) {
                let mut cfgs: Vec<NetworkConfig> = Vec::new();
                let mut policies: Vec<SelectionPolicy> = Vec::new();
                let mut index = Vec::new();
                for (_, s) in points {
                    let cfg = s.network();
                    let ci = cfgs.iter().position(|c| *c == cfg).unwrap_or_else(|| {
                        cfgs.push(cfg);
                        cfgs.len() - 1
                    });
                    let mut pis = Vec::new();
                    for p in policy_at(s)? {
                        let pi = policies.iter().position(|q| *q == p).unwrap_or_else(|| {
                            policies.push(p);
                            policies.len() - 1
                        });
                        pis.push(pi);
                    }
                    index.push((ci, pis));
                }
                let grid = sweep(&cfgs, &policies)?;
                for (pt, (ci, pis)) in index.iter().enumerate() {
                    for (ki, &pi) in pis.iter().enumerate() {
                        store(pt, ki, &grid[*ci][pi]);
                    }
                }
            } else {
                for (pt, (_, s)) in points.iter().enumerate() {
                    let grid = sweep(&[s.network()], &policy_at(s)?)?;
                    for (ki, e) in grid[0].iter().enumerate() {
                        store(pt, ki, e);
                    }
                }
            }
        }
        Metric::FeedbackMean => {
            for (pt, (_, s)) in points.iter().enumerate() {
                let Some(t) = s.threshold else { continue };
                for (ki, &k) in kinds.iter().enumerate() {
                    if let Some((_, model)) = feedback_functional(k) {
                        let h = montecarlo::mc_feedback_dist(&s.network(), model, t, run.trials, run.seed, None)?;
                        store(pt, ki, &h.mean_estimate());
                    }
                }
            }
        }
        Metric::RateBound => {}
    }
    Ok(())
}

/// Evaluates every requested cell. Cells without a method (analytic values for
/// baseline rules, simulated Jensen bounds) produce no row.
pub fn evaluate(spec: &ExperimentSpec) -> Result<Vec<Row>, CliError> {
    spec.validate()?;
    let kinds = spec.policy_kinds()?;
    let points = spec.points();
    let q = RateQuadrature::default();
    let mut cells: HashMap<Key, Cell> = HashMap::new();
    for &metric in &spec.run.metrics {
        for &method in &spec.run.methods {
            match method {
                Method::Analytic => {
                    for (pt, (_, s)) in points.iter().enumerate() {
                        for (ki, &k) in kinds.iter().enumerate() {
                            if let Some(v) = analytic_cell(metric, s, k, &q)? {
                                cells.insert((pt, ki, method, metric), (v, None));
                            }
                        }
                    }
                }
                Method::Montecarlo => montecarlo_cells(spec, metric, &points, &kinds, &mut cells)?,
            }
        }
    }
    let mut rows = Vec::new();
    for (pt, (x, _)) in points.iter().enumerate() {
        for (ki, k) in kinds.iter().enumerate() {
            for &method in &spec.run.methods {
                for &metric in &spec.run.metrics {
                    if let Some(&(value, std_error)) = cells.get(&(pt, ki, method, metric)) {
                        rows.push(Row {
                            sweep_var: *x,
                            policy: k.name(),
                            method,
                            metric,
                            value,
                            std_error,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}
