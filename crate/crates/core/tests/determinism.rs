//! Simulation results depend on the seed only, not on the worker pool.

use ris_core::montecarlo::{mc_feedback_dist, mc_outage, mc_rate};
use ris_core::{NetworkConfig, PathLossModel, PolicyKind, SelectionPolicy};

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn estimators_ignore_thread_count() {
    let cfg = NetworkConfig {
        avg_snr: 10.0,
        ..NetworkConfig::default()
    };
    let policy = SelectionPolicy::new(PolicyKind::MinMin);
    let run = || {
        (
            mc_outage(&cfg, &policy, 5000, 3).unwrap(),
            mc_rate(&cfg, &policy, 5000, 2, 3).unwrap(),
            mc_feedback_dist(&cfg, PathLossModel::ExpLaw, 6.0, 5000, 3, None)
                .unwrap()
                .mean_estimate(),
        )
    };
    let one = pool(1).install(run);
    let four = pool(4).install(run);
    assert_eq!(one, four);
    let other = mc_outage(&cfg, &policy, 5000, 4).unwrap();
    assert_ne!(one.0, other);
}
