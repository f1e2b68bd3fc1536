//! Turns run records into the two headline measures, completion time and
//! energy efficiency, and aggregates Monte Carlo batches.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{SimConfig, SlotHistogram, NODE_COUNT, SINK_COUNT};
use crate::rlnc::{GENERATION_COUNT, GENERATION_SIZE};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("cannot aggregate an empty batch")]
    EmptyBatch,
}

/// Outcome of one completed dissemination run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub completion_slots: u64,
    pub completion_time_us: f64,
    pub energy_per_node_j: [f64; NODE_COUNT],
    pub slot_histogram: SlotHistogram,
    pub innovative_deliveries: u64,
}

impl RunRecord {
    pub fn total_energy_j(&self) -> f64 {
        self.energy_per_node_j.iter().sum()
    }
}

/// Useful payload bits delivered to every sink over the total energy of all
/// eight nodes. Headers count as overhead and are excluded from the
/// numerator.
pub fn energy_efficiency(r: &RunRecord, config: &SimConfig) -> f64 {
    let useful_bits =
        (SINK_COUNT * GENERATION_COUNT * GENERATION_SIZE * config.phy.payload_len * 8) as f64;
    useful_bits / r.total_energy_j()
}

/// Mean, sample standard deviation and normal-approximation 95% confidence
/// half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub mean: f64,
    pub std_dev: f64,
    pub ci95_half_width: f64,
}

fn stats(values: &[f64]) -> Stats {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let std_dev = var.sqrt();
    Stats {
        mean,
        std_dev,
        ci95_half_width: 1.96 * std_dev / n.sqrt(),
    }
}

/// Batch aggregate over homogeneous-config runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub runs: usize,
    pub completion_time_us: Stats,
    pub energy_efficiency_bits_per_j: Stats,
    /// Per-round outcome rates across the whole batch.
    pub idle_rate: f64,
    pub success_rate: f64,
    pub collision_rate: f64,
    pub poll_rate: f64,
}

pub fn aggregate(records: &[RunRecord], config: &SimConfig) -> Result<BatchSummary, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::EmptyBatch);
    }
    let times: Vec<f64> = records.iter().map(|r| r.completion_time_us).collect();
    let effs: Vec<f64> = records.iter().map(|r| energy_efficiency(r, config)).collect();
    let mut hist = SlotHistogram::default();
    for r in records {
        hist.idle += r.slot_histogram.idle;
        hist.success += r.slot_histogram.success;
        hist.collision += r.slot_histogram.collision;
        hist.poll += r.slot_histogram.poll;
    }
    let rounds = hist.rounds() as f64;
    Ok(BatchSummary {
        runs: records.len(),
        completion_time_us: stats(&times),
        energy_efficiency_bits_per_j: stats(&effs),
        idle_rate: hist.idle as f64 / rounds,
        success_rate: hist.success as f64 / rounds,
        collision_rate: hist.collision as f64 / rounds,
        poll_rate: hist.poll as f64 / rounds,
    })
}
