//! Experiment files: a `[scenario]`, an optional `[sweep]` and a `[run]` table.

use std::path::{Path, PathBuf};

use ris_core::{NetworkConfig, PathLossModel, PolicyKind};
use serde::Deserialize;

use crate::CliError;

/// `value_linear = 10^(dB/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    PowerLaw,
    ExpLaw,
}

impl From<ModelName> for PathLossModel {
    fn from(m: ModelName) -> Self {
        match m {
            ModelName::PowerLaw => PathLossModel::PowerLaw,
            ModelName::ExpLaw => PathLossModel::ExpLaw,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_d")]
    pub d: f64,
    pub intensity: f64,
    #[serde(default = "default_n_elements")]
    pub n_elements: u32,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub avg_snr_db: f64,
    #[serde(default = "default_target_snr_db")]
    pub target_snr_db: f64,
    #[serde(default = "default_model")]
    pub model: ModelName,
    /// Feedback threshold; absent means every node reports.
    #[serde(default)]
    pub threshold: Option<f64>,
}

fn default_d() -> f64 {
    1.2
}
fn default_n_elements() -> u32 {
    16
}
fn default_eta() -> f64 {
    4.0
}
fn default_alpha() -> f64 {
    1.037
}
fn default_target_snr_db() -> f64 {
    5.0
}
fn default_model() -> ModelName {
    ModelName::PowerLaw
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            d: default_d(),
            intensity: 0.5,
            n_elements: default_n_elements(),
            eta: default_eta(),
            alpha: default_alpha(),
            avg_snr_db: 0.0,
            target_snr_db: default_target_snr_db(),
            model: default_model(),
            threshold: None,
        }
    }
}

impl Scenario {
    pub fn network(&self) -> NetworkConfig {
        NetworkConfig {
            d: self.d,
            intensity: self.intensity,
            n_elements: self.n_elements,
            eta: self.eta,
            alpha: self.alpha,
            avg_snr: db_to_linear(self.avg_snr_db),
            target_snr: db_to_linear(self.target_snr_db),
            model: self.model.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    AvgSnrDb,
    Intensity,
    NElements,
    Threshold,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let span = self.max - self.min;
        (0..self.steps)
            .map(|i| self.min + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Outage,
    Rate,
    RateBound,
    FeedbackMean,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Rate => "rate",
            Metric::RateBound => "rate_bound",
            Metric::FeedbackMean => "feedback_mean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Montecarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Montecarlo => "montecarlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
    /// Policy names; empty means the optimum rule of the scenario's model.
    #[serde(default)]
    pub policies: Vec<String>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_fading_draws")]
    pub fading_draws: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_metrics() -> Vec<Metric> {
    vec![Metric::Outage]
}
fn default_methods() -> Vec<Method> {
    vec![Method::Analytic, Method::Montecarlo]
}
fn default_trials() -> usize {
    100_000
}
fn default_seed() -> u64 {
    1
}
fn default_fading_draws() -> usize {
    1
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            metrics: default_metrics(),
            policies: Vec::new(),
            methods: default_methods(),
            trials: default_trials(),
            seed: default_seed(),
            fading_draws: default_fading_draws(),
            output: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub scenario: Scenario,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub run: RunSection,
}

pub fn parse_policy(name: &str) -> Result<PolicyKind, CliError> {
    PolicyKind::ALL
        .iter()
        .copied()
        .find(|k| k.name() == name)
        .ok_or_else(|| {
            let known: Vec<&str> = PolicyKind::ALL.iter().map(|k| k.name()).collect();
            CliError::Parse(format!(
                "unknown policy `{name}` (expected one of {})",
                known.join(", ")
            ))
        })
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Policies to evaluate, defaulting to the model's optimum.
    pub fn policy_kinds(&self) -> Result<Vec<PolicyKind>, CliError> {
        if self.run.policies.is_empty() {
            return Ok(vec![PolicyKind::optimum_for(self.scenario.model.into())]);
        }
        self.run.policies.iter().map(|p| parse_policy(p)).collect()
    }

    /// Checks everything that can be checked before any evaluation.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Parse(msg));
        if let Err(e) = self.scenario.network().validate() {
            return bad(format!("invalid scenario: {e}"));
        }
        if let Some(t) = self.scenario.threshold {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("threshold = {t} must be positive and finite"));
            }
        }
        if let Some(s) = &self.sweep {
            if !(s.min.is_finite() && s.max.is_finite()) {
                return bad("sweep bounds must be finite".into());
            }
            if s.steps < 2 {
                return bad(format!("sweep steps = {} must be at least 2", s.steps));
            }
            for v in s.values() {
                let ok = match s.variable {
                    SweepVariable::AvgSnrDb => true,
                    SweepVariable::Intensity | SweepVariable::Threshold => v > 0.0,
                    SweepVariable::NElements => v >= 1.0 && (v - v.round()).abs() < 1e-9,
                };
                if !ok {
                    return bad(format!("sweep value {v} is not valid for {:?}", s.variable));
                }
            }
        }
        if self.run.metrics.is_empty() || self.run.methods.is_empty() {
            return bad("run.metrics and run.methods must be non-empty".into());
        }
        if self.run.fading_draws == 0 {
            return bad("run.fading_draws must be at least 1".into());
        }
        let kinds = self.policy_kinds()?;
        if self.run.metrics.contains(&Metric::FeedbackMean) {
            let has_threshold = self.scenario.threshold.is_some()
                || self
                    .sweep
                    .as_ref()
                    .is_some_and(|s| s.variable == SweepVariable::Threshold);
            if !has_threshold {
                return bad("metric feedback_mean needs scenario.threshold or a threshold sweep".into());
            }
            if !kinds
                .iter()
                .any(|k| matches!(k, PolicyKind::OptProduct | PolicyKind::OptSum))
            {
                return bad("metric feedback_mean needs an opt-product or opt-sum policy".into());
            }
        }
        Ok(())
    }

    /// Sweep points as `(swept value, scenario at that point)`. Without a
    /// sweep there is a single point labelled with the average SNR in dB.
    pub fn points(&self) -> Vec<(f64, Scenario)> {
        let Some(sweep) = &self.sweep else {
            return vec![(self.scenario.avg_snr_db, self.scenario.clone())];
        };
        sweep
            .values()
            .into_iter()
            .map(|v| {
                let mut s = self.scenario.clone();
                match sweep.variable {
                    SweepVariable::AvgSnrDb => s.avg_snr_db = v,
                    SweepVariable::Intensity => s.intensity = v,
                    SweepVariable::NElements => s.n_elements = v.round() as u32,
                    SweepVariable::Threshold => s.threshold = Some(v),
                }
                (v, s)
            })
            .collect()
    }

    /// Whether every sweep point can share one set of PPP realizations.
    pub fn shares_realizations(&self, metric: Metric) -> bool {
        match self.sweep.as_ref().map(|s| s.variable) {
            None | Some(SweepVariable::AvgSnrDb) | Some(SweepVariable::Threshold) => true,
            Some(SweepVariable::NElements) => metric != Metric::Rate,
            Some(SweepVariable::Intensity) => false,
        }
    }
}
