//! Parameter sweeps: a product grid over σ, agent count, and seed, one
//! simulation per cell, one summary row per cell. Cells run in parallel and
//! share nothing; a failed cell records its error in the row instead of
//! aborting the sweep.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sphereflock::diagnostics;
use sphereflock::simulate;

use crate::config::{ConfigError, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: RunConfig,
    /// Grid axes; a missing axis keeps the base value. An explicitly empty
    /// axis makes the grid empty, which is an error.
    #[serde(default)]
    pub sigma: Option<Vec<f64>>,
    #[serde(default)]
    pub n: Option<Vec<usize>>,
    #[serde(default)]
    pub seed: Option<Vec<u64>>,
}

impl SweepConfig {
    pub fn from_path(path: &Path) -> Result<SweepConfig, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sigma: f64,
    pub n: usize,
    pub seed: u64,
    pub e0: f64,
    pub flocking_condition: bool,
    pub final_flock_metric: f64,
    pub final_antipodal_margin: f64,
    pub min_antipodal_margin: f64,
    pub status: String,
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("empty sweep grid")]
    EmptyGrid,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Runs every cell of the grid. Row order is the grid order (σ outermost,
/// then n, then seed) regardless of the execution schedule.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    let sigmas = cfg
        .sigma
        .clone()
        .unwrap_or_else(|| vec![cfg.base.params.sigma]);
    let ns: Vec<Option<usize>> = match &cfg.n {
        None => vec![None],
        Some(v) => v.iter().map(|&n| Some(n)).collect(),
    };
    let seeds: Vec<Option<u64>> = match &cfg.seed {
        None => vec![None],
        Some(v) => v.iter().map(|&s| Some(s)).collect(),
    };
    if sigmas.is_empty() || ns.is_empty() || seeds.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    let mut cells = Vec::new();
    for &sigma in &sigmas {
        for &n in &ns {
            for &seed in &seeds {
                cells.push((sigma, n, seed));
            }
        }
    }
    Ok(cells
        .par_iter()
        .map(|&(sigma, n, seed)| run_cell(&cfg.base, sigma, n, seed))
        .collect())
}

fn run_cell(base: &RunConfig, sigma: f64, n: Option<usize>, seed: Option<u64>) -> SweepRow {
    let mut config = base.clone();
    config.params.sigma = sigma;
    if let Some(seed) = seed {
        // An explicit seed axis must decide the draw alone.
        config.params.seed = seed;
        config.scenario.clear_seed();
    }
    let mut row = SweepRow {
        sigma,
        n: n.unwrap_or_else(|| base.scenario.n_agents()),
        seed: 0,
        e0: f64::NAN,
        flocking_condition: false,
        final_flock_metric: f64::NAN,
        final_antipodal_margin: f64::NAN,
        min_antipodal_margin: f64::NAN,
        status: String::new(),
    };
    if let Some(count) = n {
        if let Err(e) = config.scenario.set_n(count) {
            row.seed = config.scenario.seed_override().unwrap_or(config.params.seed);
            row.status = format!("error: {e}");
            return row;
        }
        if config.params.n != 0 {
            config.params.n = count;
        }
    }
    row.seed = config.scenario.seed_override().unwrap_or(config.params.seed);
    let (ens, params) = match config.assemble() {
        Ok(pair) => pair,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    let traj = match simulate(&ens, &params) {
        Ok(t) => t,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    row.e0 = traj.initial_energy();
    row.flocking_condition =
        sigma > 0.0 && diagnostics::flocking_condition(params.n, row.e0, sigma);
    if let Some(last) = traj.final_diag() {
        row.final_flock_metric = last.flock_metric;
        row.final_antipodal_margin = last.antipodal_margin;
    }
    row.min_antipodal_margin = traj
        .samples
        .iter()
        .map(|s| s.diag.antipodal_margin)
        .fold(f64::INFINITY, f64::min);
    row.status = match &traj.blowup {
        None => "ok".to_string(),
        Some(b) => format!("blowup t={:.6}", b.t),
    };
    row
}

/// Output location for the summary table.
pub fn sweep_csv_path(dir: &Path) -> PathBuf {
    dir.join("sweep.csv")
}
