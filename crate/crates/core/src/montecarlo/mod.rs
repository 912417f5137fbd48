//! Brute-force estimators over PPP realizations and fading draws.
//!
//! Trials run in fixed-size blocks. Block `b` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, blocks are evaluated in
//! parallel and reduced in block order, so every result depends on the seed
//! only, never on the number of worker threads.

mod estimators;
mod stats;

pub use estimators::{
    mc_distance_dist, mc_feedback_dist, mc_gamma_ks, mc_outage, mc_outage_sweep, mc_rate, mc_rate_sweep,
    simulation_window, snr_dominance_violations, WINDOW_EPSILON,
};
pub use stats::{dkw_epsilon, Accumulator, ChiSquareTest, CountHistogram, EmpiricalDist, Estimate};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Trials per RNG stream.
pub const BLOCK_SIZE: usize = 1024;

/// Runs `n_trials` trials in blocks and returns the per-block results in
/// block order. `block` receives the block's RNG and its trial count.
pub(crate) fn run_blocks<T, F>(n_trials: usize, seed: u64, block: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    let n_blocks = n_trials.div_ceil(BLOCK_SIZE);
    (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BLOCK_SIZE.min(n_trials - b * BLOCK_SIZE);
            block(&mut rng, count)
        })
        .collect()
}
