//! End-to-end runs of the `ris-select` binary.

use std::path::Path;
use std::process::{Command, Output};

use ris_core::analytic::{self, xi_exp, xi_pow, DistCdf, ScoreModel};
use ris_core::NetworkConfig;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ris-select"));
    c.env_remove("RIS_SELECT_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_spec(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

struct Row {
    sweep_var: f64,
    policy: String,
    method: String,
    metric: String,
    value: f64,
    std_error: Option<f64>,
}

fn rows(csv: &str) -> Vec<Row> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("sweep_var,policy,method,metric,value,std_error"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 6, "{l}");
            Row {
                sweep_var: f[0].parse().unwrap(),
                policy: f[1].to_string(),
                method: f[2].to_string(),
                metric: f[3].to_string(),
                value: f[4].parse().unwrap(),
                std_error: (!f[5].is_empty()).then(|| f[5].parse().unwrap()),
            }
        })
        .collect()
}

/// Checks every analytic row against the simulated row that follows it.
fn assert_agree_within_3se(rows: &[Row]) -> usize {
    let mut compared = 0;
    for pair in rows.windows(2) {
        let (a, m) = (&pair[0], &pair[1]);
        if a.method == "analytic" && m.method == "montecarlo" && a.policy == m.policy && a.metric == m.metric {
            let se = m.std_error.unwrap();
            let tol = if se > 0.0 { 3.0 * se } else { 1e-12 };
            assert!(
                (a.value - m.value).abs() <= tol,
                "{} {} at {}: analytic {} vs simulated {} ± {se}",
                a.policy,
                a.metric,
                a.sweep_var,
                a.value,
                m.value
            );
            compared += 1;
        }
    }
    compared
}

#[test]
fn missing_intensity_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "bad.toml", "[scenario]\nd = 1.2\nn_elements = 8\n");
    let out = run(&["run", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("missing field `intensity`"), "{err}");
}

#[test]
fn other_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "ok.toml", "[scenario]\nintensity = 0.5\n");
    assert_eq!(run(&["run"]).status.code(), Some(2));
    assert_eq!(run(&["outage", "--policy", "nearest"]).status.code(), Some(2));
    assert_eq!(
        run(&["outage", "--spec", "/nonexistent/spec.toml"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["outage", "--trials", "10"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["feedback", "--spec", &spec]).status.code(), Some(2));
    let threads = bin()
        .args(["outage", "--spec", &spec])
        .env("RIS_SELECT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn snr_db_zero_is_unit_linear_snr() {
    let out = run(&["outage", "--snr-db", "0", "--trials", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&stdout(&out));
    let cfg = NetworkConfig {
        avg_snr: 1.0,
        ..NetworkConfig::default()
    };
    assert_eq!(r[0].sweep_var, 0.0);
    assert_eq!(r[0].method, "analytic");
    assert!(r[0].std_error.is_none());
    assert_eq!(r[0].value, analytic::outage(&cfg).unwrap());
    assert_eq!(r[1].method, "montecarlo");
    let out = run(&["outage", "--snr-db", "-10", "--trials", "2000", "--policy", "min-max"]);
    let r = rows(&stdout(&out));
    assert_eq!(r.len(), 1, "baselines have no analytic row");
    assert_eq!(r[0].sweep_var, -10.0);
}

#[test]
fn distance_dist_min_sum_stays_in_dkw_band() {
    let out = run(&[
        "distance-dist",
        "--model",
        "min-sum",
        "--trials",
        "20000",
        "--points",
        "25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,analytic_cdf,empirical_cdf,dkw_band"));
    let mut n = 0;
    for l in lines {
        let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(f[0] > 2.4, "sum of distances exceeds 2d");
        assert!((f[1] - f[2]).abs() <= f[3], "{l}");
        n += 1;
    }
    assert_eq!(n, 25);
}

#[test]
fn validate_default_passes() {
    let out = run(&["validate", "--trials", "5000"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("[PASS]")).count() >= 12);
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn validate_reports_failure_with_exit_1() {
    // Below the simulator's minimum trial count, the simulation checks fail.
    let out = run(&["validate", "--trials", "500"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(1), "{text}");
    assert!(text.contains("[FAIL]"));
    assert!(text.contains("[PASS] void identity"));
}

#[test]
fn outage_sweep_matches_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("outage.csv");
    let spec = write_spec(
        dir.path(),
        "outage.toml",
        &format!(
            "[scenario]\nd = 1.2\nintensity = 0.5\neta = 4.0\ntarget_snr_db = 5.0\nn_elements = 8\n\
             [sweep]\nvariable = \"avg_snr_db\"\nmin = -10\nmax = 20\nsteps = 7\n\
             [run]\npolicies = [\"opt-product\", \"min-min\"]\ntrials = 20000\noutput = {:?}\n",
            csv.to_str().unwrap()
        ),
    );
    let out = run(&["run", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty(), "CSV goes to the output file");
    let r = rows(&std::fs::read_to_string(&csv).unwrap());
    assert_eq!(r.len(), 7 * 3);
    assert_eq!(assert_agree_within_3se(&r), 7);
    for point in r.chunks(3) {
        assert_eq!(point[2].policy, "min-min");
        assert!(
            point[1].value <= point[2].value,
            "optimum beats min-min on shared realizations"
        );
    }
}

#[test]
fn feedback_sweep_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "fb.toml",
        "[scenario]\nd = 1.2\nintensity = 0.5\n\
         [sweep]\nvariable = \"threshold\"\nmin = 5\nmax = 20\nsteps = 4\n\
         [run]\nmetrics = [\"feedback_mean\"]\npolicies = [\"opt-product\", \"opt-sum\"]\ntrials = 5000\n",
    );
    let out = run(&["run", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&stdout(&out));
    assert_eq!(r.len(), 4 * 2 * 2);
    assert_eq!(assert_agree_within_3se(&r), 8);
    let pow = DistCdf::new(ScoreModel::MinProduct, 0.5, 1.2).unwrap();
    let sum = DistCdf::new(ScoreModel::MinSum, 0.5, 1.2).unwrap();
    let last = &r[r.len() - 4..];
    assert_eq!(last[0].sweep_var, 20.0);
    assert_eq!(last[0].value, xi_pow(20.0, &pow).unwrap());
    assert_eq!(last[2].value, xi_exp(20.0, &sum).unwrap());
    assert!((last[2].value - 155.95).abs() < 0.01);
}

#[test]
fn rate_and_bound_rows() {
    let out = run(&[
        "rate",
        "--snr-db",
        "5",
        "--trials",
        "4000",
        "--policy",
        "opt-product",
        "--policy",
        "min-min",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&stdout(&out));
    let labels: Vec<(&str, &str)> = r.iter().map(|x| (x.policy.as_str(), x.method.as_str())).collect();
    assert_eq!(
        labels,
        vec![
            ("opt-product", "analytic"),
            ("opt-product", "montecarlo"),
            ("min-min", "montecarlo")
        ]
    );
    assert!(r.iter().all(|x| x.metric == "rate"));
    assert_agree_within_3se(&r);
}

#[test]
fn csv_is_deterministic_across_runs_and_thread_counts() {
    let args = [
        "outage",
        "--trials",
        "5000",
        "--seed",
        "17",
        "--policy",
        "opt-product",
        "--policy",
        "mid-point",
    ];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    let one = bin().args(args).env("RIS_SELECT_THREADS", "1").output().unwrap().stdout;
    let three = bin().args(args).env("RIS_SELECT_THREADS", "3").output().unwrap().stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(a, one);
    assert_eq!(a, three);
    let other_seed = run(&[
        "outage",
        "--trials",
        "5000",
        "--seed",
        "18",
        "--policy",
        "opt-product",
        "--policy",
        "mid-point",
    ]);
    assert_ne!(a, other_seed.stdout);
}

#[test]
fn shipped_specs_run() {
    let specs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let dir = tempfile::tempdir().unwrap();
    let mut n = 0;
    for entry in std::fs::read_dir(&specs).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let csv = dir.path().join("out.csv");
            let out = run(&[
                "run",
                "--spec",
                path.to_str().unwrap(),
                "--trials",
                "2000",
                "--out",
                csv.to_str().unwrap(),
            ]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{}: {}",
                path.display(),
                String::from_utf8_lossy(&out.stderr)
            );
            assert!(rows(&std::fs::read_to_string(&csv).unwrap()).len() >= 10);
            n += 1;
        }
    }
    assert!(n >= 5);
}
