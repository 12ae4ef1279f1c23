//! Parallel parameter sweeps.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, HarnessError, MakerSpec, WORKERS_ENV};
use crate::board::{Edge, GameState};
use crate::breaker::BreakerKind;
use crate::engine::{play, GameResult, GoalKind, Notes, Outcome, PlayOptions};
use crate::monitors::{self, MonitorParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub b: usize,
    pub goal: String,
    pub maker: String,
    pub breaker: String,
    pub seed: u64,
    /// `Maker`, `Breaker`, `Forfeit`, `Cap` or `Error`.
    pub winner: String,
    pub maker_moves: usize,
    /// Maker moves minus the size of the smallest winning set.
    pub excess: i64,
    pub violations: usize,
    /// `key=value` pairs of the Maker's statistics, `;`-separated.
    pub fitted_stage_stats: String,
}

impl SweepRow {
    pub fn maker_won(&self) -> bool {
        self.winner == "Maker"
    }

    fn key(&self) -> (usize, usize, String, u64) {
        (self.n, self.b, self.breaker.clone(), self.seed)
    }
}

/// One game with the harness conventions: the breaker and the header share
/// `seed`, the header carries the maker's config hash.
pub fn run_game(
    maker: &MakerSpec,
    goal: GoalKind,
    n: usize,
    b: usize,
    breaker: BreakerKind,
    seed: u64,
    move_cap: Option<usize>,
) -> Result<GameResult, HarnessError> {
    let state = GameState::new(n, b).map_err(|e| HarnessError::Config(e.to_string()))?;
    let mut mk = maker.build(n, b, goal)?;
    let mut br = breaker.build(b, seed);
    let opts = PlayOptions {
        move_cap,
        seed,
        config_hash: maker.config_hash()?,
    };
    play(state, mk.as_mut(), br.as_mut(), goal, &opts).map_err(|e| HarnessError::Config(e.to_string()))
}

pub fn format_stats(stats: &Notes) -> String {
    stats
        .iter()
        .map(|(k, v)| {
            if v.fract() == 0.0 && v.abs() < 1e15 {
                format!("{k}={}", *v as i64)
            } else {
                format!("{k}={v:.4}")
            }
        })
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub goal: String,
    pub edges: Vec<Edge>,
}

/// Writes `<stem>.jsonl` and, after a win, `<stem>.cert.json`.
pub fn write_game(dir: &Path, stem: &str, result: &GameResult) -> Result<PathBuf, HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let path = dir.join(format!("{stem}.jsonl"));
    result.transcript.write(&path)?;
    if let Some(cert) = &result.certificate {
        let cf = CertificateFile {
            goal: result.transcript.header.goal.to_string(),
            edges: cert.clone(),
        };
        let cpath = dir.join(format!("{stem}.cert.json"));
        let text = serde_json::to_string(&cf).map_err(|e| HarnessError::Config(e.to_string()))?;
        fs::write(&cpath, text).map_err(|e| HarnessError::io(&cpath, e))?;
    }
    Ok(path)
}

pub fn game_stem(maker: &str, goal: GoalKind, n: usize, b: usize, breaker: BreakerKind, seed: u64) -> String {
    format!("{maker}_{}_n{n}_b{b}_{breaker}_s{seed}", goal.code().to_lowercase())
}

struct Cell {
    n: usize,
    b: usize,
    breaker: BreakerKind,
    seed: u64,
}

fn run_cell(cfg: &ExperimentConfig, cell: &Cell) -> Result<SweepRow, HarnessError> {
    let mut row = SweepRow {
        n: cell.n,
        b: cell.b,
        goal: cfg.goal.to_string(),
        maker: cfg.maker.name.clone(),
        breaker: cell.breaker.to_string(),
        seed: cell.seed,
        winner: "Error".into(),
        maker_moves: 0,
        excess: 0,
        violations: 0,
        fitted_stage_stats: String::new(),
    };
    let result = match run_game(&cfg.maker, cfg.goal, cell.n, cell.b, cell.breaker, cell.seed, cfg.move_cap) {
        Ok(r) => r,
        Err(HarnessError::Config(msg)) => {
            row.fitted_stage_stats = format!("error={}", msg.replace([',', ';', '\n'], " "));
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    row.winner = result.outcome.label().into();
    row.maker_moves = result.maker_moves_used;
    row.excess = result.maker_moves_used as i64 - cfg.goal.smallest_winning_set(cell.n) as i64;
    let mut stats = result.stats.clone();
    if let Outcome::Forfeit(f) = &result.outcome {
        stats.insert("forfeit_stage".into(), f.stage as f64);
    }
    row.fitted_stage_stats = format_stats(&stats);
    if cfg.monitors {
        let which = monitors::applicable(&result.transcript);
        row.violations = monitors::run(&result.transcript, &which, &MonitorParams::default())?.len();
    }
    if let Some(dir) = &cfg.transcripts {
        let stem = game_stem(&cfg.maker.name, cfg.goal, cell.n, cell.b, cell.breaker, cell.seed);
        write_game(dir, &stem, &result)?;
    }
    Ok(row)
}

/// Worker count from the environment, if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&w| w > 0)
}

/// Plays every `(n, b, breaker, seed)` cell. Strategy errors become cell
/// outcomes; I/O errors abort. Rows come back sorted, and are written to
/// the configured CSV.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, HarnessError> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &n in &cfg.n {
        for b in cfg.biases(n)? {
            for &breaker in &cfg.breakers {
                for &seed in &cfg.seeds {
                    cells.push(Cell { n, b, breaker, seed });
                }
            }
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers_from_env() {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| HarnessError::Config(e.to_string()))?;
    let results: Vec<Result<SweepRow, HarnessError>> =
        pool.install(|| cells.par_iter().map(|c| run_cell(cfg, c)).collect());
    let mut rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    rows.sort_by_key(SweepRow::key);
    if let Some(path) = &cfg.csv {
        write_csv(path, &rows)?;
    }
    Ok(rows)
}

pub fn write_csv(path: &Path, rows: &[SweepRow]) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    fs::write(path, csv_bytes(rows)?).map_err(|e| HarnessError::io(path, e))
}

pub fn csv_bytes(rows: &[SweepRow]) -> Result<Vec<u8>, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| HarnessError::Config(e.to_string()))
}
