//! Monte Carlo batch runner. Runs are fully independent; per-run random
//! streams are derived from (master seed, run index), so the parallel and
//! sequential paths produce identical records in identical order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::engine::{run, EngineError, SimConfig};
use crate::metrics::RunRecord;

pub fn run_batch_sequential(
    config: &SimConfig,
    master_seed: u64,
    runs: u64,
) -> Result<Vec<RunRecord>, EngineError> {
    (0..runs).map(|i| run(config, master_seed, i)).collect()
}

#[cfg(feature = "parallel")]
pub fn run_batch_parallel(
    config: &SimConfig,
    master_seed: u64,
    runs: u64,
) -> Result<Vec<RunRecord>, EngineError> {
    (0..runs)
        .into_par_iter()
        .map(|i| run(config, master_seed, i))
        .collect()
}

/// Dispatches to the parallel path when built with the `parallel` feature,
/// otherwise falls back to the sequential loop.
pub fn run_batch(config: &SimConfig, master_seed: u64, runs: u64) -> Result<Vec<RunRecord>, EngineError> {
    #[cfg(feature = "parallel")]
    {
        run_batch_parallel(config, master_seed, runs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(config, master_seed, runs)
    }
}
