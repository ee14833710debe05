//! Executes one configured run end to end: assemble, integrate, write every
//! artifact. The binary's `simulate` subcommand and the certification
//! suite's determinism check both go through this path.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use sphereflock::integrator::SimulateError;
use sphereflock::{simulate, DiagnosticsRecord, Trajectory};

use crate::config::{ConfigError, RunConfig};
use crate::csvio;
use crate::manifest::{self, RunManifest};
use crate::plot;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Simulate(#[from] SimulateError),
}

pub struct RunOutcome {
    pub traj: Trajectory,
    pub manifest: RunManifest,
    pub out_dir: PathBuf,
}

/// Runs the config and writes timeseries.csv, snapshots.csv, manifest.json,
/// and (optionally) the SVG plots into its output directory. A blowup is not
/// an error here: the truncated artifacts are still written and the caller
/// reads the outcome from the trajectory.
pub fn execute_run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    let out = config
        .output_dir
        .clone()
        .ok_or(ConfigError::MissingOutputDir)?;
    let (ens, params) = config.assemble()?;
    let started = Instant::now();
    let traj = simulate(&ens, &params)?;
    fs::create_dir_all(&out).map_err(|source| ConfigError::Write {
        path: out.clone(),
        source,
    })?;
    let records: Vec<DiagnosticsRecord> = traj.samples.iter().map(|s| s.diag.clone()).collect();
    csvio::write_file(
        &out.join("timeseries.csv"),
        &csvio::timeseries_bytes(&records),
    )?;
    csvio::write_file(
        &out.join("snapshots.csv"),
        &csvio::snapshots_bytes(&traj, config.snapshot_every),
    )?;
    let manifest = manifest::build_manifest(config, &traj, started.elapsed().as_secs_f64());
    manifest::write_manifest(&out, &manifest)?;
    if config.emit_plots {
        csvio::write_file(&out.join("energy.svg"), plot::energy_svg(&records).as_bytes())?;
        csvio::write_file(
            &out.join("flock_metric.svg"),
            plot::flock_metric_svg(&records).as_bytes(),
        )?;
    }
    Ok(RunOutcome {
        traj,
        manifest,
        out_dir: out,
    })
}
