//! Experiment orchestration: strategy x payload x rate sweeps over seeded
//! Monte Carlo batches, and CSV emission of the equilibrium analysis tables.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use dagsim_core::batch::run_batch;
use dagsim_core::engine::{run_logged, SimConfig, SlotEvent};
use dagsim_core::game::{
    best_response_residual, expected_energy_simple, nep_delay_bounded, nep_simple, utility,
    GameParams, Player, StrategyProfile,
};
use dagsim_core::mac::{StrategyKind, BOMAC_CW_MAX_DEFAULT};
use dagsim_core::metrics::aggregate;

/// Default payload grid, bytes.
pub const DEFAULT_PAYLOADS: [usize; 5] = [100, 250, 500, 1000, 1500];
/// Default rate grid, Mb/s.
pub const DEFAULT_RATES: [u32; 2] = [54, 24];
pub const DEFAULT_RUNS: u64 = 100;

/// One full sweep: the Cartesian product of strategies, payloads and rates,
/// each cell a seeded Monte Carlo batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub strategies: Vec<StrategyKind>,
    pub payloads: Vec<usize>,
    pub rates: Vec<u32>,
    pub runs: u64,
    pub master_seed: u64,
    pub a: f64,
    pub b: f64,
    pub p_poll: f64,
    pub cw_max: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            strategies: vec![
                StrategyKind::SimpleDag,
                StrategyKind::DelayBoundedDag,
                StrategyKind::BoMac,
            ],
            payloads: DEFAULT_PAYLOADS.to_vec(),
            rates: DEFAULT_RATES.to_vec(),
            runs: DEFAULT_RUNS,
            master_seed: 1,
            a: 0.7,
            b: 1.0,
            p_poll: 0.5,
            cw_max: BOMAC_CW_MAX_DEFAULT,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.strategies.is_empty() || self.payloads.is_empty() || self.rates.is_empty() {
            bail!("sweep axes must be non-empty");
        }
        if self.runs == 0 {
            bail!("runs must be >= 1");
        }
        for &p in &self.payloads {
            if !(100..=1500).contains(&p) {
                bail!("payload {p} outside [100, 1500] bytes");
            }
        }
        for &r in &self.rates {
            if r != 54 && r != 24 {
                bail!("rate {r} Mb/s not supported; use 54 or 24");
            }
        }
        Ok(())
    }

    pub fn cell_config(&self, strategy: StrategyKind, payload: usize, rate: u32) -> SimConfig {
        let mut c = SimConfig::new(strategy, payload, rate);
        c.a = self.a;
        c.b = self.b;
        c.p_poll = self.p_poll;
        c.cw_max = self.cw_max;
        c
    }

    fn cells(&self) -> Vec<(StrategyKind, usize, u32)> {
        let mut out = Vec::new();
        for &s in &self.strategies {
            for &p in &self.payloads {
                for &r in &self.rates {
                    out.push((s, p, r));
                }
            }
        }
        out
    }
}

pub fn strategy_name(s: StrategyKind) -> &'static str {
    match s {
        StrategyKind::SimpleDag => "simple-dag",
        StrategyKind::DelayBoundedDag => "delay-bounded-dag",
        StrategyKind::BoMac => "bo-mac",
    }
}

/// Decorrelates the seed of each sweep cell; runs inside a cell use the
/// per-run stream index.
fn cell_seed(master_seed: u64, cell_index: u64) -> u64 {
    master_seed ^ cell_index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub const SWEEP_CSV_HEADER: &str = "strategy,payload_bytes,rate_mbps,runs,\
mean_completion_ms,std_completion_ms,ci95_completion_ms,\
mean_efficiency_bits_per_j,std_efficiency_bits_per_j,ci95_efficiency_bits_per_j,\
idle_rate,success_rate,collision_rate,poll_rate";

/// Runs the whole sweep and renders one CSV row per cell, in configuration
/// order regardless of completion order.
pub fn run_experiment(config: &SweepConfig) -> Result<String> {
    config.validate()?;
    let mut csv = String::new();
    csv.push_str(SWEEP_CSV_HEADER);
    csv.push('\n');
    for (idx, (strategy, payload, rate)) in config.cells().into_iter().enumerate() {
        let cell = config.cell_config(strategy, payload, rate);
        let seed = cell_seed(config.master_seed, idx as u64);
        let records = run_batch(&cell, seed, config.runs)
            .with_context(|| format!("sweep cell {strategy:?}/{payload}B/{rate}Mbps"))?;
        let summary = aggregate(&records, &cell)?;
        let t = summary.completion_time_us;
        let e = summary.energy_efficiency_bits_per_j;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            strategy_name(strategy),
            payload,
            rate,
            config.runs,
            t.mean / 1000.0,
            t.std_dev / 1000.0,
            t.ci95_half_width / 1000.0,
            e.mean,
            e.std_dev,
            e.ci95_half_width,
            summary.idle_rate,
            summary.success_rate,
            summary.collision_rate,
            summary.poll_rate,
        )?;
    }
    Ok(csv)
}

/// Renders the slot log of run 0 of a cell as line-delimited JSON.
pub fn slot_log_jsonl(cell: &SimConfig, seed: u64) -> Result<String> {
    let (_, events) = run_logged(cell, seed, 0)?;
    let mut out = String::new();
    for e in &events {
        out.push_str(&serde_json::to_string(e)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn slot_log_seed(config: &SweepConfig, cell_index: u64) -> u64 {
    cell_seed(config.master_seed, cell_index)
}

/// Recovers the slot events from a JSONL log.
pub fn parse_slot_log(jsonl: &str) -> Result<Vec<SlotEvent>> {
    jsonl
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).context("malformed slot log line"))
        .collect()
}

const UTILITY_S2_VALUES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Player 1 utility over an s1 grid for five fixed opponent strategies,
/// Fig. 2 style. The indifference strategy a/(a+b) is carried in its own
/// column. A zero expected energy (only the s1 = 0, s2 = 1 corner) is
/// floored at 1e-12 J to keep every cell finite.
pub fn emit_utility_curves(a: f64, b: f64, e_total: f64, grid: usize) -> Result<String> {
    if grid < 2 {
        bail!("grid resolution must be >= 2");
    }
    let s1_star = nep_simple(a, b)?;
    let params = GameParams::from_ratios(9.5e-4, a, b, e_total, 0.5);
    let mut csv = String::from("s1,s2,expected_energy_j,utility,s1_star\n");
    for &s2 in &UTILITY_S2_VALUES {
        for i in 0..grid {
            let s1 = i as f64 / (grid - 1) as f64;
            let energy =
                expected_energy_simple(StrategyProfile::new(s1, s2), &params, Player::One);
            let u = utility(&params, energy.max(1e-12))?;
            writeln!(csv, "{s1},{s2},{energy},{u},{s1_star}")?;
        }
    }
    Ok(csv)
}

/// Zero-contour samples of the delay-bounded best-response polynomial over
/// the unit square, the diagonal residual trace, and the symmetric fixed
/// point, Fig. 3 style.
pub fn emit_best_response_locus(a: f64, b: f64, grid: usize) -> Result<String> {
    if grid < 2 {
        bail!("grid resolution must be >= 2");
    }
    let mut csv = String::from("kind,s1,s2,residual\n");
    let residual = |s1: f64, s2: f64| best_response_residual(StrategyProfile::new(s1, s2), a, b);

    // zero contour: for each s2, bisect every sign change of the residual
    // along s1
    const SCAN: usize = 1024;
    for j in 0..grid {
        let s2 = j as f64 / (grid - 1) as f64;
        let mut prev_s1 = 0.0;
        let mut prev_r = residual(prev_s1, s2);
        for i in 1..=SCAN {
            let s1 = i as f64 / SCAN as f64;
            let r = residual(s1, s2);
            if prev_r == 0.0 {
                writeln!(csv, "locus,{prev_s1},{s2},{prev_r}")?;
            } else if r != 0.0 && prev_r.signum() != r.signum() {
                let (mut lo, mut hi) = (prev_s1, s1);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if residual(mid, s2).signum() == prev_r.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let root = 0.5 * (lo + hi);
                writeln!(csv, "locus,{root},{s2},{}", residual(root, s2))?;
            }
            prev_s1 = s1;
            prev_r = r;
        }
    }

    // diagonal trace; 0.24 and 0.25 are always sampled so the sign change
    // around the fixed point is visible in the output
    let mut diag: Vec<f64> = (0..grid).map(|i| i as f64 / (grid - 1) as f64).collect();
    diag.extend([0.24, 0.25]);
    diag.sort_by(|x, y| x.partial_cmp(y).unwrap());
    diag.dedup();
    for s in diag {
        writeln!(csv, "diagonal,{s},{s},{}", residual(s, s))?;
    }

    let s_star = nep_delay_bounded(a, b, 1e-9)?;
    writeln!(csv, "fixed_point,{s_star},{s_star},{}", residual(s_star, s_star))?;
    Ok(csv)
}
