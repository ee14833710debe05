//! Run configuration: a scenario plus integration parameters plus artifact
//! destinations, round-trippable through JSON without loss.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sphereflock::dynamics::ParamError;
use sphereflock::scenarios::ScenarioError;
use sphereflock::{Ensemble, ScenarioSpec, SimParams};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("params.n = {params_n} but the scenario produces {scenario_n} agents")]
    AgentCount { params_n: usize, scenario_n: usize },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("no output directory: set output_dir in the config or pass --out")]
    MissingOutputDir,
    #[error("snapshot_every must be at least 1")]
    SnapshotEvery,
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// One simulation run: what to integrate and where to put the artifacts.
///
/// `params.n == 0` means "take the agent count from the scenario"; a nonzero
/// value must match it. A seed embedded in the scenario overrides
/// `params.seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioSpec,
    #[serde(default)]
    pub params: SimParams,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Also render energy.svg and flock_metric.svg after the run.
    #[serde(default)]
    pub emit_plots: bool,
    /// Write full agent snapshots every this many recorded samples; the
    /// final sample is always included.
    #[serde(default = "default_snapshot_every")]
    pub snapshot_every: usize,
}

fn default_snapshot_every() -> usize {
    10
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Demo run used when `simulate` is invoked without a config file.
    pub fn default_run() -> RunConfig {
        RunConfig {
            scenario: ScenarioSpec::RandomUniform {
                n: 8,
                speed: 1.0,
                seed: None,
            },
            params: SimParams {
                sigma: 1.0,
                t_end: 10.0,
                ..SimParams::default()
            },
            output_dir: None,
            emit_plots: false,
            snapshot_every: default_snapshot_every(),
        }
    }

    /// Resolves the agent count, validates scenario and parameters, and
    /// materializes the initial ensemble. Returns the effective parameters
    /// (agent count filled in).
    pub fn assemble(&self) -> Result<(Ensemble, SimParams), ConfigError> {
        if self.snapshot_every == 0 {
            return Err(ConfigError::SnapshotEvery);
        }
        self.scenario.validate()?;
        let scenario_n = self.scenario.n_agents();
        let mut params = self.params.clone();
        if params.n == 0 {
            params.n = scenario_n;
        } else if params.n != scenario_n {
            return Err(ConfigError::AgentCount {
                params_n: params.n,
                scenario_n,
            });
        }
        params.validate()?;
        let ens = self.scenario.build(params.seed)?;
        Ok((ens, params))
    }
}
