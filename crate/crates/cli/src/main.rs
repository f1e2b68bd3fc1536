//! `dagsim` — batch experiment driver for the dissemination simulator.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use dagsim_cli::{
    emit_best_response_locus, emit_utility_curves, run_experiment, slot_log_jsonl, slot_log_seed,
    strategy_name, SweepConfig,
};
use dagsim_core::mac::StrategyKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Simple,
    DelayBounded,
    Bomac,
    All,
}

impl StrategyArg {
    fn kinds(self) -> Vec<StrategyKind> {
        match self {
            StrategyArg::Simple => vec![StrategyKind::SimpleDag],
            StrategyArg::DelayBounded => vec![StrategyKind::DelayBoundedDag],
            StrategyArg::Bomac => vec![StrategyKind::BoMac],
            StrategyArg::All => vec![
                StrategyKind::SimpleDag,
                StrategyKind::DelayBoundedDag,
                StrategyKind::BoMac,
            ],
        }
    }
}

/// Optional TOML config; command-line flags override its values.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    strategy: Option<String>,
    payloads: Option<Vec<usize>>,
    rates: Option<Vec<u32>>,
    runs: Option<u64>,
    seed: Option<u64>,
    a: Option<f64>,
    b: Option<f64>,
    p_poll: Option<f64>,
    cw_max: Option<u32>,
}

#[derive(Parser)]
#[command(name = "dagsim", version, about = "Slotted dissemination simulator with game-theoretic MAC strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a strategy x payload x rate Monte Carlo sweep and emit a CSV.
    Sweep {
        /// TOML config file; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Payload lengths in bytes, comma separated.
        #[arg(long, value_delimiter = ',')]
        payloads: Option<Vec<usize>>,
        /// Rates in Mb/s, comma separated (54 and/or 24).
        #[arg(long = "rate", value_delimiter = ',')]
        rates: Option<Vec<u32>>,
        #[arg(long)]
        runs: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        p_poll: Option<f64>,
        #[arg(long)]
        cw_max: Option<u32>,
        /// Also write per-cell JSONL slot logs (run 0 of each cell) next to
        /// the CSV.
        #[arg(long)]
        emit_slot_log: bool,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit utility-vs-strategy tables of the simple game (Fig. 2 shape).
    UtilityCurves {
        #[arg(long, default_value_t = 0.7)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 100.0)]
        e_total: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the delay-bounded best-response locus and fixed point (Fig. 3
    /// shape).
    BestResponseLocus {
        #[arg(long, default_value_t = 0.7)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_strategy_name(name: &str) -> Result<Vec<StrategyKind>> {
    match name {
        "simple" | "simple-dag" => Ok(vec![StrategyKind::SimpleDag]),
        "delay-bounded" | "delay-bounded-dag" => Ok(vec![StrategyKind::DelayBoundedDag]),
        "bomac" | "bo-mac" => Ok(vec![StrategyKind::BoMac]),
        "all" => Ok(StrategyArg::All.kinds()),
        other => anyhow::bail!("unknown strategy {other:?} in config file"),
    }
}

fn write_output(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    if let Ok(workers) = std::env::var("DAGSIM_WORKERS") {
        let n: usize = workers.parse().context("DAGSIM_WORKERS must be an integer")?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker pool")?;
    }

    match Cli::parse().command {
        Command::Sweep {
            config,
            strategy,
            payloads,
            rates,
            runs,
            seed,
            a,
            b,
            p_poll,
            cw_max,
            emit_slot_log,
            out,
        } => {
            let file: FileConfig = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    toml::from_str(&text).context("parsing config file")?
                }
                None => FileConfig::default(),
            };
            let defaults = SweepConfig::default();
            let strategies = match (strategy, file.strategy) {
                (Some(arg), _) => arg.kinds(),
                (None, Some(name)) => parse_strategy_name(&name)?,
                (None, None) => defaults.strategies,
            };
            let sweep = SweepConfig {
                strategies,
                payloads: payloads.or(file.payloads).unwrap_or(defaults.payloads),
                rates: rates.or(file.rates).unwrap_or(defaults.rates),
                runs: runs.or(file.runs).unwrap_or(defaults.runs),
                master_seed: seed.or(file.seed).unwrap_or(defaults.master_seed),
                a: a.or(file.a).unwrap_or(defaults.a),
                b: b.or(file.b).unwrap_or(defaults.b),
                p_poll: p_poll.or(file.p_poll).unwrap_or(defaults.p_poll),
                cw_max: cw_max.or(file.cw_max).unwrap_or(defaults.cw_max),
            };
            let csv = run_experiment(&sweep)?;
            write_output(out.as_ref(), &csv)?;
            if emit_slot_log {
                let dir = out
                    .as_ref()
                    .and_then(|p| p.parent().map(|d| d.to_path_buf()))
                    .unwrap_or_else(|| PathBuf::from("."));
                let mut idx = 0u64;
                for &s in &sweep.strategies {
                    for &p in &sweep.payloads {
                        for &r in &sweep.rates {
                            let cell = sweep.cell_config(s, p, r);
                            let jsonl = slot_log_jsonl(&cell, slot_log_seed(&sweep, idx))?;
                            let name = format!("slotlog_{}_{}B_{}mbps.jsonl", strategy_name(s), p, r);
                            fs::write(dir.join(&name), jsonl)
                                .with_context(|| format!("writing {name}"))?;
                            idx += 1;
                        }
                    }
                }
            }
        }
        Command::UtilityCurves {
            a,
            b,
            e_total,
            grid,
            out,
        } => {
            let csv = emit_utility_curves(a, b, e_total, grid)?;
            write_output(out.as_ref(), &csv)?;
        }
        Command::BestResponseLocus { a, b, grid, out } => {
            let csv = emit_best_response_locus(a, b, grid)?;
            write_output(out.as_ref(), &csv)?;
        }
    }
    Ok(())
}
