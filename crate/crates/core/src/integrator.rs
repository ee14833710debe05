//! Fixed-step RK4 with post-step projection back onto the constraint set
//! (unit positions, tangent velocities), plus the trajectory container the
//! diagnostics and verification layers consume.
//!
//! Projection after every full step keeps the constraint drift at rounding
//! level without changing the order of the method. Intermediate stage states
//! are used as-is; they sit O(dt^2) off the sphere, which the force terms
//! tolerate by construction (none of them divides by a constraint residual).

use serde::Serialize;

use crate::diagnostics::{record, DiagnosticsRecord};
use crate::dynamics::{rhs, AgentState, Derivative, DynamicsError, Ensemble, ParamError, SimParams};
use crate::geometry::tangent_project;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    UnitNorm,
    Tangency,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ViolationKind::UnitNorm => write!(f, "unit-norm"),
            ViolationKind::Tangency => write!(f, "tangency"),
        }
    }
}

/// One admissibility failure: which agent, which constraint, how far off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub agent: usize,
    pub kind: ViolationKind,
    pub residual: f64,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "agent {}: {} residual {:.3e}",
            self.agent, self.kind, self.residual
        )
    }
}

/// Scans for `||x| - 1| > tol` and `|<x, v>| > tol`, one entry per failed
/// constraint. Empty means admissible. Non-finite coordinates report as
/// infinite residuals.
pub fn check_admissible(ens: &Ensemble, tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, a) in ens.agents.iter().enumerate() {
        let norm_res = if a.x.iter().all(|c| c.is_finite()) {
            (a.x.norm() - 1.0).abs()
        } else {
            f64::INFINITY
        };
        if !(norm_res <= tol) {
            out.push(Violation {
                agent: i,
                kind: ViolationKind::UnitNorm,
                residual: norm_res,
            });
        }
        let tan_res = if a.v.iter().all(|c| c.is_finite()) && norm_res.is_finite() {
            a.x.dot(&a.v).abs()
        } else {
            f64::INFINITY
        };
        if !(tan_res <= tol) {
            out.push(Violation {
                agent: i,
                kind: ViolationKind::Tangency,
                residual: tan_res,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("initial state inadmissible ({} violation(s); first: {})", .violations.len(), .violations[0])]
pub struct AdmissibilityError {
    pub violations: Vec<Violation>,
}

/// The state left the basin where projection is meaningful: a position norm
/// strayed past [`tol::BLOWUP_RADIUS`] from 1, or a coordinate went non-finite
/// (reported as a NaN radius).
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error, Serialize)]
#[error("integration blew up at t = {t}: agent {agent} at radius {radius:.6}")]
pub struct BlowupError {
    pub agent: usize,
    pub t: f64,
    pub radius: f64,
}

/// Renormalizes positions and projects velocities onto the tangent planes.
/// Fails when a position norm is outside `1 ± BLOWUP_RADIUS` or anything is
/// non-finite; succeeding means the constraint residuals are at rounding level.
pub fn project(ens: &mut Ensemble) -> Result<(), BlowupError> {
    let t = ens.t;
    for (i, a) in ens.agents.iter_mut().enumerate() {
        let r = a.x.norm();
        if !r.is_finite() || (r - 1.0).abs() > tol::BLOWUP_RADIUS {
            return Err(BlowupError {
                agent: i,
                t,
                radius: r,
            });
        }
        a.x /= r;
        a.v = tangent_project(&a.x, &a.v);
        if a.v.iter().any(|c| !c.is_finite()) {
            return Err(BlowupError {
                agent: i,
                t,
                radius: f64::NAN,
            });
        }
        debug_assert!((a.x.norm() - 1.0).abs() <= tol::PROJECTION_TOL);
        debug_assert!(a.x.dot(&a.v).abs() <= tol::PROJECTION_TOL * (1.0 + a.v.norm()));
    }
    Ok(())
}

fn advance(base: &Ensemble, h: f64, d: &Derivative, t: f64) -> Ensemble {
    let agents = base
        .agents
        .iter()
        .enumerate()
        .map(|(i, a)| AgentState {
            x: a.x + d.dx[i] * h,
            v: a.v + d.dv[i] * h,
        })
        .collect();
    Ensemble::new(agents, t)
}

fn blow(e: DynamicsError, t: f64) -> BlowupError {
    match e {
        DynamicsError::NonFinite { agent } => BlowupError {
            agent,
            t,
            radius: f64::NAN,
        },
    }
}

/// One classical RK4 step of size `p.dt`, then projection. The returned clock
/// is `ens.t + dt`; drivers that need an exact time grid overwrite it.
pub fn step_rk4(ens: &Ensemble, p: &SimParams) -> Result<Ensemble, BlowupError> {
    let dt = p.dt;
    let t = ens.t;
    let k1 = rhs(ens, p).map_err(|e| blow(e, t))?;
    let s2 = advance(ens, dt / 2.0, &k1, t + dt / 2.0);
    let k2 = rhs(&s2, p).map_err(|e| blow(e, s2.t))?;
    let s3 = advance(ens, dt / 2.0, &k2, t + dt / 2.0);
    let k3 = rhs(&s3, p).map_err(|e| blow(e, s3.t))?;
    let s4 = advance(ens, dt, &k3, t + dt);
    let k4 = rhs(&s4, p).map_err(|e| blow(e, s4.t))?;
    let sixth = dt / 6.0;
    let agents = ens
        .agents
        .iter()
        .enumerate()
        .map(|(i, a)| AgentState {
            x: a.x + (k1.dx[i] + (k2.dx[i] + k3.dx[i]) * 2.0 + k4.dx[i]) * sixth,
            v: a.v + (k1.dv[i] + (k2.dv[i] + k3.dv[i]) * 2.0 + k4.dv[i]) * sixth,
        })
        .collect();
    let mut next = Ensemble::new(agents, t + dt);
    project(&mut next)?;
    Ok(next)
}

/// One recorded point: the full state plus its diagnostics row.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub ensemble: Ensemble,
    pub diag: DiagnosticsRecord,
}

/// A recorded run. `params` carries the effective values (agent count filled
/// in). `blowup` is set when integration stopped early; the samples then
/// cover only the healthy prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub params: SimParams,
    pub blowup: Option<BlowupError>,
}

impl Trajectory {
    /// Time between consecutive recorded samples.
    pub fn spacing(&self) -> f64 {
        if self.samples.len() >= 2 {
            self.samples[1].diag.t - self.samples[0].diag.t
        } else {
            self.params.dt * self.params.record_every as f64
        }
    }

    /// Total energy at the first sample.
    pub fn initial_energy(&self) -> f64 {
        self.samples.first().map(|s| s.diag.e).unwrap_or(0.0)
    }

    pub fn final_diag(&self) -> Option<&DiagnosticsRecord> {
        self.samples.last().map(|s| &s.diag)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimulateError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("params declare {declared} agents but the initial state has {actual}")]
    AgentCount { declared: usize, actual: usize },
    #[error(transparent)]
    Admissibility(#[from] AdmissibilityError),
}

/// Integrates from `ens0.t` to `p.t_end` on the fixed grid `t_k = t_0 + k dt`
/// (recomputed per step, never accumulated) and records every
/// `record_every`-th step, always including the first and last states.
///
/// The initial state must be admissible at [`tol::UNIT_NORM_TOL`]. A blowup
/// mid-run returns the recorded prefix with the `blowup` field set rather
/// than an error, so callers can inspect how far the run got.
pub fn simulate(ens0: &Ensemble, p: &SimParams) -> Result<Trajectory, SimulateError> {
    let mut params = p.clone();
    if params.n == 0 {
        params.n = ens0.len();
    } else if params.n != ens0.len() {
        return Err(SimulateError::AgentCount {
            declared: params.n,
            actual: ens0.len(),
        });
    }
    params.validate()?;
    let violations = check_admissible(ens0, tol::UNIT_NORM_TOL);
    if !violations.is_empty() {
        return Err(AdmissibilityError { violations }.into());
    }

    let t0 = ens0.t;
    let span = (params.t_end - t0).max(0.0);
    let n_steps = (span / params.dt).round() as u64;

    let mut traj = Trajectory {
        samples: Vec::with_capacity(n_steps as usize / params.record_every + 2),
        params: params.clone(),
        blowup: None,
    };
    let mut current = ens0.clone();
    traj.samples.push(Sample {
        diag: record(&current, &params),
        ensemble: current.clone(),
    });
    for k in 1..=n_steps {
        match step_rk4(&current, &params) {
            Ok(mut next) => {
                next.t = t0 + k as f64 * params.dt;
                current = next;
            }
            Err(e) => {
                traj.blowup = Some(e);
                return Ok(traj);
            }
        }
        if k % params.record_every as u64 == 0 || k == n_steps {
            traj.samples.push(Sample {
                diag: record(&current, &params),
                ensemble: current.clone(),
            });
        }
    }
    Ok(traj)
}
