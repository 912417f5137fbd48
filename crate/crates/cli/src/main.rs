//! `ris-select`: analytic and simulated RIS-selection experiments as CSV.
//!
//! Exit codes: 0 success, 1 failing `validate` check, 2 bad input (arguments,
//! spec file, output path), 3 numerical failure.

mod eval;
mod spec;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ris_core::analytic::{self, DistCdf, ScoreModel};
use ris_core::montecarlo;
use ris_core::validation::{run_suite, SuiteOptions};
use ris_core::PolicyKind;

use crate::spec::{ExperimentSpec, Metric, SweepVariable};

#[derive(Debug)]
pub enum CliError {
    /// Unusable input; exit code 2.
    Parse(String),
    /// A numerical routine failed; exit code 3.
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<ris_core::Error> for CliError {
    fn from(e: ris_core::Error) -> Self {
        match e {
            ris_core::Error::InvalidParameter(_) => CliError::Parse(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ris-select",
    version,
    about = "Location-based RIS selection: analytic results and Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a spec file.
    Run(Common),
    /// Outage probability.
    Outage(Common),
    /// Average achievable rate (bits/s/Hz).
    Rate(Common),
    /// Mean number of nodes that report under the feedback threshold.
    Feedback(Common),
    /// Distribution of the optimum selection score.
    DistanceDist(DistanceArgs),
    /// Run the invariant suite and report each check.
    Validate(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Experiment spec (TOML).
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials.
    #[arg(long)]
    trials: Option<usize>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Average SNR in dB; replaces an SNR sweep with this single point.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    /// Feedback threshold; replaces a threshold sweep with this single point.
    #[arg(long)]
    threshold: Option<f64>,
    /// Selection policy (repeatable): opt-product, opt-sum, min-min, min-max, mid-point.
    #[arg(long = "policy")]
    policies: Vec<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Functional {
    MinProduct,
    MinSum,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    common: Common,
    /// Selection functional; defaults to the one matching the scenario's model.
    #[arg(long)]
    model: Option<Functional>,
    /// Number of grid points between the 0.1% and 99.9% quantiles.
    #[arg(long, default_value_t = 50)]
    points: usize,
}

/// Loads the spec (or the defaults) and applies command-line overrides.
fn load(common: &Common) -> Result<ExperimentSpec, CliError> {
    let mut spec = match &common.spec {
        Some(path) => ExperimentSpec::load(path)?,
        None => ExperimentSpec::default(),
    };
    if let Some(seed) = common.seed {
        spec.run.seed = seed;
    }
    if let Some(trials) = common.trials {
        spec.run.trials = trials;
    }
    if let Some(out) = &common.out {
        spec.run.output = Some(out.clone());
    }
    if let Some(db) = common.snr_db {
        spec.scenario.avg_snr_db = db;
        if spec
            .sweep
            .as_ref()
            .is_some_and(|s| s.variable == SweepVariable::AvgSnrDb)
        {
            spec.sweep = None;
        }
    }
    if let Some(t) = common.threshold {
        spec.scenario.threshold = Some(t);
        if spec
            .sweep
            .as_ref()
            .is_some_and(|s| s.variable == SweepVariable::Threshold)
        {
            spec.sweep = None;
        }
    }
    if !common.policies.is_empty() {
        spec.run.policies = common.policies.clone();
    }
    Ok(spec)
}

fn open_output(spec: &ExperimentSpec) -> Result<Box<dyn Write>, CliError> {
    match &spec.run.output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display())))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Parse(format!("cannot write CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Parse(format!("cannot write CSV: {e}")))
}

fn experiment(common: &Common, metric: Option<Metric>) -> Result<(), CliError> {
    let mut spec = load(common)?;
    if let Some(m) = metric {
        spec.run.metrics = vec![m];
    }
    let rows = eval::evaluate(&spec)?;
    let records = rows.into_iter().map(|r| {
        vec![
            r.sweep_var.to_string(),
            r.policy.to_string(),
            r.method.name().to_string(),
            r.metric.name().to_string(),
            r.value.to_string(),
            r.std_error.map(|s| s.to_string()).unwrap_or_default(),
        ]
    });
    write_csv(
        open_output(&spec)?,
        &["sweep_var", "policy", "method", "metric", "value", "std_error"],
        records,
    )
}

fn distance_dist(args: &DistanceArgs) -> Result<(), CliError> {
    let spec = load(&args.common)?;
    spec.validate()?;
    if args.points < 2 {
        return Err(CliError::Parse("--points must be at least 2".into()));
    }
    let cfg = spec.scenario.network();
    let functional = args.model.unwrap_or(match PolicyKind::optimum_for(cfg.model) {
        PolicyKind::OptSum => Functional::MinSum,
        _ => Functional::MinProduct,
    });
    let (model, kind) = match functional {
        Functional::MinProduct => (ScoreModel::MinProduct, PolicyKind::OptProduct),
        Functional::MinSum => (ScoreModel::MinSum, PolicyKind::OptSum),
    };
    let dist = DistCdf::new(model, cfg.intensity, cfg.d)?;
    let emp = montecarlo::mc_distance_dist(&cfg, kind, spec.run.trials, spec.run.seed)?;
    let band = emp.dkw_epsilon(0.99);
    let lo = analytic::optimum_score_quantile(&dist, 1e-3)?;
    let hi = analytic::optimum_score_quantile(&dist, 1.0 - 1e-3)?;
    let mut records = Vec::with_capacity(args.points);
    for i in 0..args.points {
        let g = lo + (hi - lo) * i as f64 / (args.points - 1) as f64;
        records.push(vec![
            g.to_string(),
            dist.cdf(g)?.to_string(),
            emp.cdf(g).to_string(),
            band.to_string(),
        ]);
    }
    write_csv(
        open_output(&spec)?,
        &["gamma", "analytic_cdf", "empirical_cdf", "dkw_band"],
        records,
    )
}

/// Returns whether every check passed.
fn validate(common: &Common) -> Result<bool, CliError> {
    let spec = load(common)?;
    spec.validate()?;
    let defaults = SuiteOptions::default();
    let opts = SuiteOptions {
        trials: common.trials.unwrap_or(defaults.trials),
        seed: spec.run.seed,
        threshold: spec.scenario.threshold.unwrap_or(defaults.threshold),
    };
    let checks = run_suite(&spec.scenario.network(), &opts);
    let mut out = open_output(&spec)?;
    let mut all = true;
    for c in &checks {
        all &= c.passed;
        let tag = if c.passed { "PASS" } else { "FAIL" };
        writeln!(out, "[{tag}] {}: {}", c.name, c.detail).map_err(|e| CliError::Parse(e.to_string()))?;
    }
    writeln!(
        out,
        "{} of {} checks passed",
        checks.iter().filter(|c| c.passed).count(),
        checks.len()
    )
    .map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(all)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("RIS_SELECT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Parse(format!("RIS_SELECT_THREADS = `{raw}` must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Parse(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match &cli.command {
        Command::Run(c) => {
            if c.spec.is_none() {
                return Err(CliError::Parse("run needs --spec <path>".into()));
            }
            experiment(c, None).map(|()| true)
        }
        Command::Outage(c) => experiment(c, Some(Metric::Outage)).map(|()| true),
        Command::Rate(c) => experiment(c, Some(Metric::Rate)).map(|()| true),
        Command::Feedback(c) => experiment(c, Some(Metric::FeedbackMean)).map(|()| true),
        Command::DistanceDist(a) => distance_dist(a).map(|()| true),
        Command::Validate(c) => validate(c),
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let numerical = CliError::from(ris_core::Error::NonConvergence {
            func: "genhyp",
            terms: 2000,
        });
        assert_eq!(numerical.exit_code(), 3);
        let invalid = CliError::from(ris_core::Error::InvalidParameter("n_trials".into()));
        assert_eq!(invalid.exit_code(), 2);
    }
}
