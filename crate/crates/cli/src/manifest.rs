//! The run manifest: one JSON document per run recording what was asked for,
//! what came out, and which recorded-sample checks held.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sphereflock::diagnostics::{self, BOUND_SLACK};
use sphereflock::{DiagnosticsRecord, Trajectory};

use crate::config::{ConfigError, RunConfig};
use crate::csvio;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct BlowupInfo {
    pub agent: usize,
    pub t: f64,
    pub radius: f64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// Version of the toolchain that produced the artifacts.
    pub artifact_version: &'static str,
    /// Unix seconds at which the run finished.
    pub created_unix: u64,
    /// Wall-clock seconds spent integrating and writing.
    pub wall_clock_seconds: f64,
    pub config: RunConfig,
    pub n_agents: usize,
    pub n_samples: usize,
    pub initial_energy: f64,
    pub final_diagnostics: Option<DiagnosticsRecord>,
    /// Whether σ exceeds N²E(0)/2, the sufficient condition for flocking;
    /// absent when σ = 0.
    pub flocking_condition: Option<bool>,
    /// Tail declaration from the recorded diagnostics; absent when σ = 0.
    pub flocking_declared: Option<bool>,
    pub blowup: Option<BlowupInfo>,
    /// Pass/fail of every check evaluated on the recorded samples.
    pub checks: BTreeMap<&'static str, bool>,
}

/// Builds the manifest from a finished (possibly truncated) trajectory.
pub fn build_manifest(config: &RunConfig, traj: &Trajectory, wall_clock_seconds: f64) -> RunManifest {
    let e0 = traj.initial_energy();
    let sigma = traj.params.sigma;
    let (norm_res, tangency_res) = diagnostics::constraint_extremes(traj);
    let speed_bound = (traj.params.n as f64 * e0).sqrt();

    let mut checks = BTreeMap::new();
    checks.insert("completed", traj.blowup.is_none());
    checks.insert("unit_norm_1e-12", norm_res <= 1e-12);
    checks.insert("tangency_1e-12", tangency_res <= 1e-12);
    checks.insert(
        "energy_non_increasing",
        traj.samples
            .windows(2)
            .all(|w| w[1].diag.e <= w[0].diag.e + 1e-10),
    );
    checks.insert(
        "speed_bound",
        traj.samples
            .iter()
            .all(|s| s.diag.v_max <= speed_bound + 1e-8),
    );
    if let Some(report) = diagnostics::diameter_bound_check(traj) {
        checks.insert(
            "diameter_bound",
            report.max_diameter_sq <= report.diameter_bound_sq + BOUND_SLACK,
        );
    }
    // Whether the run flocked is reported, not checked: a sound run that
    // has not aligned by t_end is still sound.
    let flocking_declared = diagnostics::flocking_declared(traj);

    RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION"),
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        wall_clock_seconds,
        config: config.clone(),
        n_agents: traj.params.n,
        n_samples: traj.samples.len(),
        initial_energy: e0,
        final_diagnostics: traj.final_diag().cloned(),
        flocking_condition: (sigma > 0.0)
            .then(|| diagnostics::flocking_condition(traj.params.n, e0, sigma)),
        flocking_declared,
        blowup: traj.blowup.as_ref().map(|b| BlowupInfo {
            agent: b.agent,
            t: b.t,
            radius: b.radius,
        }),
        checks,
    }
}

/// Serializes and writes the manifest; called exactly once per run.
pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<(), ConfigError> {
    let path = dir.join(MANIFEST_NAME);
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    csvio::write_file(&path, text.as_bytes())
}
