//! Force evaluation: the right-hand side of the constrained flocking system.
//!
//! Each agent carries a unit position `x` and a tangent velocity `v` and
//! obeys
//!
//! ```text
//! dx_i = v_i
//! dv_i = -(|v_i|^2 / |x_i|^2) x_i                                 (centripetal)
//!        + (1/N) Σ_j ψ(|x_i - x_j|) (R_{x_j→x_i} v_j - v_i)       (alignment)
//!        + (σ/N) Σ_k (|x_i|^2 x_k - <x_i, x_k> x_i)               (bonding)
//! ```
//!
//! with the alignment contribution of a pair defined as zero when
//! `|x_i + x_j| <= EPS_ANTIPODAL` (the weight vanishes there anyway; the
//! cutoff makes the branch bit-deterministic). The self term j = i is kept
//! in both sums; it contributes exactly zero.
//!
//! The total force is tangent: `<x_i, dv_i> = -|v_i|^2` up to rounding, which
//! is what keeps unit norms and tangency invariant along exact solutions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{rotate, Vec3};
use crate::tol;
use crate::weight::CommWeight;

/// One agent: unit position and tangent velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub x: Vec3,
    pub v: Vec3,
}

/// Ordered agent collection plus the simulation clock.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub agents: Vec<AgentState>,
    pub t: f64,
}

impl Ensemble {
    pub fn new(agents: Vec<AgentState>, t: f64) -> Self {
        Ensemble { agents, t }
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn all_finite(&self) -> bool {
        self.agents
            .iter()
            .all(|a| a.x.iter().all(|c| c.is_finite()) && a.v.iter().all(|c| c.is_finite()))
    }
}

/// Run parameters. `n = 0` means "infer from the scenario"; assembly fills it
/// in and [`SimParams::validate`] rejects a leftover zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub weight: CommWeight,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_dt() -> f64 {
    1e-3
}
fn default_t_end() -> f64 {
    50.0
}
fn default_record_every() -> usize {
    100
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            n: 0,
            sigma: 0.0,
            weight: CommWeight::default(),
            dt: default_dt(),
            t_end: default_t_end(),
            record_every: default_record_every(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("agent count must be >= 1")]
    AgentCount,
    #[error("dt must be finite and > 0, got {0}")]
    Dt(f64),
    #[error("t_end must be finite and >= 0, got {0}")]
    THorizon(f64),
    #[error("sigma must be finite and >= 0, got {0}")]
    Sigma(f64),
    #[error("record_every must be >= 1")]
    RecordEvery,
    #[error(transparent)]
    Weight(#[from] crate::weight::WeightError),
}

impl SimParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.n == 0 {
            return Err(ParamError::AgentCount);
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(ParamError::Dt(self.dt));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(ParamError::THorizon(self.t_end));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(ParamError::Sigma(self.sigma));
        }
        if self.record_every == 0 {
            return Err(ParamError::RecordEvery);
        }
        self.weight.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("non-finite state for agent {agent}")]
    NonFinite { agent: usize },
}

/// Time derivative of an ensemble, index-aligned with its agents.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub dx: Vec<Vec3>,
    pub dv: Vec<Vec3>,
}

/// `-(|v|^2 / |x|^2) x`: cancels the normal acceleration of motion on the sphere.
pub fn centripetal_force(a: &AgentState) -> Vec3 {
    a.x * (-a.v.norm_squared() / a.x.norm_squared())
}

/// `(σ/N) Σ_k (|x_i|^2 x_k - <x_i, x_k> x_i)`: tangential attraction toward
/// every other agent. `<result, x_i> = 0` up to rounding.
pub fn bonding_force(i: usize, ens: &Ensemble, sigma: f64) -> Vec3 {
    let xi = ens.agents[i].x;
    let nx2 = xi.norm_squared();
    let mut acc = Vec3::zeros();
    for other in &ens.agents {
        acc += other.x * nx2 - xi * xi.dot(&other.x);
    }
    acc * (sigma / ens.len() as f64)
}

/// `(1/N) Σ_j ψ_ij (R_{x_j→x_i} v_j - v_i)`, with antipodal pairs
/// contributing zero. Summation order is the fixed agent order, so the
/// result is bit-reproducible regardless of how callers parallelize over `i`.
pub fn alignment_force(i: usize, ens: &Ensemble, weight: &CommWeight) -> Vec3 {
    let xi = ens.agents[i].x;
    let vi = ens.agents[i].v;
    let mut acc = Vec3::zeros();
    for other in &ens.agents {
        if (xi + other.x).norm() <= tol::EPS_ANTIPODAL {
            continue; // zero-extension branch: weight and transport both vanish
        }
        let psi = weight.eval_clamped((xi - other.x).norm());
        let transported = rotate(&other.x, &xi, &other.v)
            .expect("non-antipodal pair checked above");
        acc += (transported - vi) * psi;
    }
    acc / ens.len() as f64
}

/// Threshold below which parallel force evaluation is pure overhead.
const PAR_MIN_AGENTS: usize = 64;

/// Full right-hand side: `dx_i = v_i`, `dv_i = centripetal + alignment + bonding`.
///
/// Data-parallel over agents for large ensembles; each agent's inner sums run
/// in fixed order, so results are identical for any worker count.
pub fn rhs(ens: &Ensemble, p: &SimParams) -> Result<Derivative, DynamicsError> {
    if let Some(agent) = ens.agents.iter().position(|a| {
        a.x.iter().any(|c| !c.is_finite()) || a.v.iter().any(|c| !c.is_finite())
    }) {
        return Err(DynamicsError::NonFinite { agent });
    }
    let one = |i: usize| {
        let a = &ens.agents[i];
        centripetal_force(a) + alignment_force(i, ens, &p.weight) + bonding_force(i, ens, p.sigma)
    };
    let dv: Vec<Vec3> = if ens.len() >= PAR_MIN_AGENTS {
        (0..ens.len()).into_par_iter().map(one).collect()
    } else {
        (0..ens.len()).map(one).collect()
    };
    let dx = ens.agents.iter().map(|a| a.v).collect();
    Ok(Derivative { dx, dv })
}
