//! Initial-data generators and closed-form reference paths.
//!
//! Every generator returns states that pass [`check_admissible`] at 1e-14:
//! positions are normalized draws, velocities are tangent-projected and
//! rescaled, and the closed forms are admissible identically.
//!
//! [`check_admissible`]: crate::integrator::check_admissible

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::diagnostics::record;
use crate::dynamics::{AgentState, Ensemble, SimParams};
use crate::geometry::{tangent_project, Vec3};
use crate::integrator::{Sample, Trajectory};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("scenario needs at least one agent")]
    Empty,
    #[error("speed must be finite and >= 0, got {0}")]
    Speed(f64),
    #[error("phase {index} = {value} outside [0, pi)")]
    Phase { index: usize, value: f64 },
    #[error("cap radius must lie in (0, pi/2], got {0}")]
    CapRadius(f64),
    #[error("cap center must be a nonzero vector")]
    CapCenter,
    #[error("approach time {0} outside the open interval (0, 1)")]
    ApproachTime(f64),
    #[error("approach window [{t0}, {t1}] must be increasing and inside (0, 1)")]
    PathWindow { t0: f64, t1: f64 },
    #[error("scenario's agent count is fixed by its data")]
    FixedCount,
}

/// Declarative initial-data description; part of the run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioSpec {
    /// Positions uniform on the sphere, tangent velocities of equal speed.
    RandomUniform {
        n: usize,
        speed: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Positions uniform on the spherical cap of the given angular radius
    /// around `center`; tangent velocities of equal speed. Tight caps with
    /// small speeds keep the initial energy low, which is how runs are put
    /// on the guaranteed-flocking side of the threshold.
    CapClustered {
        n: usize,
        center: Vec3,
        radius: f64,
        speed: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Unit-speed equatorial motion, one agent per phase. An exact solution
    /// when the bonding strength is zero.
    CircularExact { phases: Vec<f64> },
    /// The two-agent closed-form path whose pair margin collapses like t^2;
    /// the state at clock `t`. Kinematic (not a solution): it exists to probe
    /// the transport-derivative bound near the antipodal cutoff.
    AntipodalApproach { t: f64 },
    /// Literal initial states, taken verbatim. The only kind that can
    /// produce an inadmissible ensemble; the simulation entry point is the
    /// gate that rejects it.
    Explicit { agents: Vec<ExplicitAgent> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitAgent {
    pub x: Vec3,
    pub v: Vec3,
}

impl ScenarioSpec {
    pub fn n_agents(&self) -> usize {
        match self {
            ScenarioSpec::RandomUniform { n, .. } => *n,
            ScenarioSpec::CapClustered { n, .. } => *n,
            ScenarioSpec::CircularExact { phases } => phases.len(),
            ScenarioSpec::AntipodalApproach { .. } => 2,
            ScenarioSpec::Explicit { agents } => agents.len(),
        }
    }

    /// Seed embedded in the scenario, if any; overrides the run-level seed.
    pub fn seed_override(&self) -> Option<u64> {
        match self {
            ScenarioSpec::RandomUniform { seed, .. } => *seed,
            ScenarioSpec::CapClustered { seed, .. } => *seed,
            _ => None,
        }
    }

    /// Drops any embedded seed so the run-level seed alone decides the draw.
    pub fn clear_seed(&mut self) {
        match self {
            ScenarioSpec::RandomUniform { seed, .. } => *seed = None,
            ScenarioSpec::CapClustered { seed, .. } => *seed = None,
            _ => {}
        }
    }

    /// Resizes the agent count where it is a free parameter. Kinds whose
    /// count is fixed by their data refuse.
    pub fn set_n(&mut self, count: usize) -> Result<(), ScenarioError> {
        match self {
            ScenarioSpec::RandomUniform { n, .. } => {
                *n = count;
                Ok(())
            }
            ScenarioSpec::CapClustered { n, .. } => {
                *n = count;
                Ok(())
            }
            _ => Err(ScenarioError::FixedCount),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        match self {
            ScenarioSpec::RandomUniform { n, speed, .. } => {
                if *n == 0 {
                    return Err(ScenarioError::Empty);
                }
                check_speed(*speed)
            }
            ScenarioSpec::CapClustered {
                n,
                center,
                radius,
                speed,
                ..
            } => {
                if *n == 0 {
                    return Err(ScenarioError::Empty);
                }
                check_speed(*speed)?;
                if !(radius.is_finite() && *radius > 0.0 && *radius <= std::f64::consts::FRAC_PI_2)
                {
                    return Err(ScenarioError::CapRadius(*radius));
                }
                if !(center.norm() > 1e-12) {
                    return Err(ScenarioError::CapCenter);
                }
                Ok(())
            }
            ScenarioSpec::CircularExact { phases } => {
                if phases.is_empty() {
                    return Err(ScenarioError::Empty);
                }
                for (index, &value) in phases.iter().enumerate() {
                    if !(value >= 0.0 && value < std::f64::consts::PI) {
                        return Err(ScenarioError::Phase { index, value });
                    }
                }
                Ok(())
            }
            ScenarioSpec::AntipodalApproach { t } => {
                if !(t.is_finite() && *t > 0.0 && *t < 1.0) {
                    return Err(ScenarioError::ApproachTime(*t));
                }
                Ok(())
            }
            ScenarioSpec::Explicit { agents } => {
                if agents.is_empty() {
                    return Err(ScenarioError::Empty);
                }
                Ok(())
            }
        }
    }

    /// Materializes the initial ensemble. Seeded kinds use their embedded
    /// seed when present, otherwise `default_seed`.
    pub fn build(&self, default_seed: u64) -> Result<Ensemble, ScenarioError> {
        self.validate()?;
        match self {
            ScenarioSpec::RandomUniform { n, speed, seed } => {
                Ok(random_admissible(*n, *speed, seed.unwrap_or(default_seed)))
            }
            ScenarioSpec::CapClustered {
                n,
                center,
                radius,
                speed,
                seed,
            } => cap_clustered(*n, center, *radius, *speed, seed.unwrap_or(default_seed)),
            ScenarioSpec::CircularExact { phases } => Ok(circular_exact(phases, 0.0)),
            ScenarioSpec::AntipodalApproach { t } => {
                let (x1, x2, v1) = antipodal_approach_state(*t)?;
                Ok(Ensemble::new(
                    vec![
                        AgentState { x: x1, v: v1 },
                        AgentState {
                            x: x2,
                            v: Vec3::zeros(),
                        },
                    ],
                    *t,
                ))
            }
            ScenarioSpec::Explicit { agents } => Ok(Ensemble::new(
                agents
                    .iter()
                    .map(|a| AgentState { x: a.x, v: a.v })
                    .collect(),
                0.0,
            )),
        }
    }
}

fn check_speed(speed: f64) -> Result<(), ScenarioError> {
    if speed.is_finite() && speed >= 0.0 {
        Ok(())
    } else {
        Err(ScenarioError::Speed(speed))
    }
}

/// Isotropic unit vector (normalized Gaussian triple).
pub fn random_unit_vector<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let g = Vec3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let n = g.norm();
        if n > 1e-6 {
            return g / n;
        }
    }
}

/// Tangent vector at `x` of the given length, direction isotropic in the
/// tangent plane. Redraws when the raw direction is nearly radial.
fn tangent_velocity<R: Rng>(rng: &mut R, x: &Vec3, speed: f64) -> Vec3 {
    loop {
        let tangent = tangent_project(x, &random_unit_vector(rng));
        let n = tangent.norm();
        if n > 1e-3 {
            // Rescaling amplifies the projection's rounding residual by
            // speed/n, which can breach the 1e-14 admissibility budget; a
            // second projection pins tangency back to rounding level while
            // changing the speed by O(residual^2).
            return tangent_project(x, &(tangent * (speed / n)));
        }
    }
}

/// Uniform positions on the sphere with equal-speed tangent velocities.
/// Deterministic under the seed.
pub fn random_admissible(n: usize, speed: f64, seed: u64) -> Ensemble {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let agents = (0..n)
        .map(|_| {
            let x = random_unit_vector(&mut rng);
            let v = tangent_velocity(&mut rng, &x, speed);
            AgentState { x, v }
        })
        .collect();
    Ensemble::new(agents, 0.0)
}

/// Uniform positions on the cap `{<x, center/|center|> >= cos(radius)}` with
/// equal-speed tangent velocities.
pub fn cap_clustered(
    n: usize,
    center: &Vec3,
    radius: f64,
    speed: f64,
    seed: u64,
) -> Result<Ensemble, ScenarioError> {
    if n == 0 {
        return Err(ScenarioError::Empty);
    }
    check_speed(speed)?;
    if !(radius.is_finite() && radius > 0.0 && radius <= std::f64::consts::FRAC_PI_2) {
        return Err(ScenarioError::CapRadius(radius));
    }
    let norm = center.norm();
    if !(norm > 1e-12) {
        return Err(ScenarioError::CapCenter);
    }
    let c = center / norm;
    // Orthonormal frame {e1, e2, c}; seeded from the smallest component so
    // the cross products are well conditioned.
    let smallest = (0..3).min_by(|&a, &b| c[a].abs().total_cmp(&c[b].abs())).unwrap();
    let mut axis = Vec3::zeros();
    axis[smallest] = 1.0;
    let e1 = c.cross(&axis).normalize();
    let e2 = c.cross(&e1);

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let z_min = radius.cos();
    let agents = (0..n)
        .map(|_| {
            // Uniform in z over [cos radius, 1] is uniform in cap area.
            let z = rng.gen_range(z_min..=1.0);
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let x = c * z + e1 * (rho * phi.cos()) + e2 * (rho * phi.sin());
            let x = x.normalize();
            let v = tangent_velocity(&mut rng, &x, speed);
            AgentState { x, v }
        })
        .collect();
    Ok(Ensemble::new(agents, 0.0))
}

/// Unit-speed equatorial motion `x_i(t) = (cos(t + a_i), sin(t + a_i), 0)`
/// evaluated at clock `t`. With zero bonding this is an exact solution: the
/// transport of any agent's velocity to any other equals the target velocity,
/// so the alignment term vanishes and the centripetal term alone sustains
/// the rotation.
pub fn circular_exact(phases: &[f64], t: f64) -> Ensemble {
    let agents = phases
        .iter()
        .map(|&a| {
            let th = t + a;
            AgentState {
                x: Vec3::new(th.cos(), th.sin(), 0.0),
                v: Vec3::new(-th.sin(), th.cos(), 0.0),
            }
        })
        .collect();
    Ensemble::new(agents, t)
}

/// Closed-form two-agent configuration approaching antipodality as `t -> 0+`:
///
/// ```text
/// x1(t) = (t^2 sin(1/sqrt t), -t^2 cos(1/sqrt t), -sqrt(1 - t^4))
/// x2(t) = (0, 0, 1)
/// ```
///
/// Returns `(x1, x2, v1)` with `v1 = dx1/dt` differentiated by hand:
///
/// ```text
/// v1 = (2t sin(1/sqrt t) - (sqrt t / 2) cos(1/sqrt t),
///       -2t cos(1/sqrt t) - (sqrt t / 2) sin(1/sqrt t),
///       2t^3 / sqrt(1 - t^4))
/// ```
///
/// The pair margin is `|x1 + x2| = sqrt(2 - 2 sqrt(1 - t^4)) = t^2 + O(t^6)`
/// and the speed is `|v1| = sqrt(t)/2 + O(t^(3/2))`, so the margin collapses
/// quadratically while the speed vanishes only like a square root. That is
/// the regime where the transport-derivative bound's `1/|x1+x2|` term
/// dominates, which is exactly what this path exists to exercise.
pub fn antipodal_approach_state(t: f64) -> Result<(Vec3, Vec3, Vec3), ScenarioError> {
    if !(t.is_finite() && t > 0.0 && t < 1.0) {
        return Err(ScenarioError::ApproachTime(t));
    }
    let t2 = t * t;
    let t4 = t2 * t2;
    let s = 1.0 / t.sqrt();
    let (sin_s, cos_s) = s.sin_cos();
    let root = (1.0 - t4).sqrt();
    let x1 = Vec3::new(t2 * sin_s, -t2 * cos_s, -root);
    let x2 = Vec3::new(0.0, 0.0, 1.0);
    let v1 = Vec3::new(
        2.0 * t * sin_s - 0.5 * t.sqrt() * cos_s,
        -2.0 * t * cos_s - 0.5 * t.sqrt() * sin_s,
        2.0 * t2 * t / root,
    );
    Ok((x1, x2, v1))
}

/// The approach path sampled on the uniform grid `t0 + k (t1 - t0)/steps`,
/// packaged as a trajectory (agent 2 pinned at the pole with zero velocity)
/// so the finite-difference checks can consume it like any recorded run.
pub fn antipodal_approach_path(t0: f64, t1: f64, steps: usize) -> Result<Trajectory, ScenarioError> {
    if !(t0.is_finite() && t1.is_finite() && t0 > 0.0 && t1 < 1.0 && t0 < t1) || steps == 0 {
        return Err(ScenarioError::PathWindow { t0, t1 });
    }
    let h = (t1 - t0) / steps as f64;
    let params = SimParams {
        n: 2,
        dt: h,
        t_end: t1,
        record_every: 1,
        ..SimParams::default()
    };
    let samples = (0..=steps)
        .map(|k| {
            let t = t0 + k as f64 * h;
            let (x1, x2, v1) = antipodal_approach_state(t)?;
            let ens = Ensemble::new(
                vec![
                    AgentState { x: x1, v: v1 },
                    AgentState {
                        x: x2,
                        v: Vec3::zeros(),
                    },
                ],
                t,
            );
            Ok(Sample {
                diag: record(&ens, &params),
                ensemble: ens,
            })
        })
        .collect::<Result<Vec<_>, ScenarioError>>()?;
    Ok(Trajectory {
        samples,
        params,
        blowup: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{energy, flocking_condition};
    use crate::dynamics::rhs;
    use crate::integrator::check_admissible;
    use approx::assert_abs_diff_eq;

    #[test]
    fn random_ensembles_are_admissible_and_deterministic() {
        let a = random_admissible(40, 0.7, 9);
        let b = random_admissible(40, 0.7, 9);
        let c = random_admissible(40, 0.7, 10);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(check_admissible(&a, 1e-14).is_empty());
        for agent in &a.agents {
            assert_abs_diff_eq!(agent.v.norm(), 0.7, epsilon = 1e-13);
        }
    }

    #[test]
    fn random_unit_speed_kinetic_energy_is_one() {
        let ens = random_admissible(1000, 1.0, 4);
        assert_abs_diff_eq!(energy(&ens, 0.0).kinetic, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn circular_exact_closed_form_values() {
        let at0 = circular_exact(&[0.0], 0.0);
        assert_eq!(at0.agents[0].x, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(at0.agents[0].v, Vec3::new(0.0, 1.0, 0.0));
        let quarter = circular_exact(&[0.0], std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(quarter.agents[0].x, Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(quarter.agents[0].v, Vec3::new(-1.0, 0.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn circular_exact_solves_the_system_without_bonding() {
        // rhs must reproduce the analytic derivative (v, -x) wherever the
        // closed form is evaluated; alignment transport is exact on the orbit.
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        let p = SimParams {
            n: 3,
            sigma: 0.0,
            ..SimParams::default()
        };
        for _ in 0..100 {
            let t = rng.gen_range(0.0..20.0);
            let phases = [
                rng.gen_range(0.0..std::f64::consts::PI),
                rng.gen_range(0.0..std::f64::consts::PI),
                rng.gen_range(0.0..std::f64::consts::PI),
            ];
            let ens = circular_exact(&phases, t);
            let d = rhs(&ens, &p).unwrap();
            for (i, a) in ens.agents.iter().enumerate() {
                assert_eq!(d.dx[i], a.v);
                assert!((d.dv[i] + a.x).norm() < 1e-12, "residual at t = {t}");
            }
        }
    }

    #[test]
    fn circular_ensembles_are_admissible() {
        let ens = circular_exact(&[0.0, 0.4, 1.3, 3.1], 7.7);
        assert!(check_admissible(&ens, 1e-14).is_empty());
    }

    #[test]
    fn approach_state_frozen_values_at_t_tenth() {
        let (x1, x2, v1) = antipodal_approach_state(0.1).unwrap();
        let mid = (x1 + x2).norm();
        assert_abs_diff_eq!(mid, 1.0000125005469073e-2, epsilon = 1e-16);
        // Same value through the margin's own closed form, a different
        // floating-point route than summing the position components. The
        // subtraction 2 - 2 sqrt(1 - t^4) cancels ~4 digits, hence the
        // looser tolerance on this route.
        let t4: f64 = 1e-4;
        assert_abs_diff_eq!(mid, (2.0 - 2.0 * (1.0 - t4).sqrt()).sqrt(), epsilon = 1e-13);
        // Margin tracks t^2 to within 1% here.
        assert!((mid / 0.01 - 1.0).abs() < 0.01);
        // Speed matches the hand-differentiated closed form exactly.
        let t: f64 = 0.1;
        let speed_sq = 4.0 * t * t + t / 4.0 + 4.0 * t.powi(6) / (1.0 - t.powi(4));
        assert_abs_diff_eq!(v1.norm_squared(), speed_sq, epsilon = 1e-15);
    }

    #[test]
    fn approach_state_is_admissible_and_tangent() {
        for &t in &[1e-3, 0.02, 0.1, 0.5, 0.9] {
            let (x1, _, v1) = antipodal_approach_state(t).unwrap();
            assert_abs_diff_eq!(x1.norm(), 1.0, epsilon = 1e-14);
            assert!(x1.dot(&v1).abs() < 1e-14, "tangency at t = {t}");
        }
    }

    #[test]
    fn approach_velocity_matches_finite_differences() {
        let h = 1e-6;
        for &t in &[0.05, 0.1, 0.4] {
            let (_, _, v1) = antipodal_approach_state(t).unwrap();
            let (xp, _, _) = antipodal_approach_state(t + h).unwrap();
            let (xm, _, _) = antipodal_approach_state(t - h).unwrap();
            let fd = (xp - xm) / (2.0 * h);
            assert!(
                (v1 - fd).norm() <= 1e-6 * v1.norm(),
                "derivative mismatch at t = {t}: {:?}",
                (v1 - fd).norm()
            );
        }
    }

    #[test]
    fn approach_asymptotics_near_zero() {
        // Margin ~ t^2 within 2%; speed ~ sqrt(t)/2 within 2% plus the
        // next-order envelope 9t (the expansion's first correction is 8t).
        let mut t = 1e-3;
        while t <= 1e-2 {
            let (x1, x2, v1) = antipodal_approach_state(t).unwrap();
            let mid = (x1 + x2).norm();
            assert!((mid / (t * t) - 1.0).abs() < 0.02, "margin rate at t = {t}");
            let speed_ratio = v1.norm() / (t.sqrt() / 2.0);
            assert!(
                (speed_ratio - 1.0).abs() < 0.02 + 9.0 * t,
                "speed rate at t = {t}: ratio {speed_ratio}"
            );
            t += 1e-3;
        }
    }

    #[test]
    fn approach_state_domain() {
        assert!(antipodal_approach_state(0.0).is_err());
        assert!(antipodal_approach_state(1.0).is_err());
        assert!(antipodal_approach_state(-0.3).is_err());
        assert!(antipodal_approach_state(f64::NAN).is_err());
        assert!(antipodal_approach_state(0.5).is_ok());
    }

    #[test]
    fn approach_path_grid_and_margins() {
        let traj = antipodal_approach_path(0.05, 0.2, 150).unwrap();
        assert_eq!(traj.samples.len(), 151);
        assert_abs_diff_eq!(traj.spacing(), 1e-3, epsilon = 1e-15);
        for s in &traj.samples {
            assert!(check_admissible(&s.ensemble, 1e-14).is_empty());
        }
        assert!(antipodal_approach_path(0.2, 0.05, 10).is_err());
        assert!(antipodal_approach_path(0.0, 0.5, 10).is_err());
    }

    #[test]
    fn cap_stays_inside_its_radius() {
        let center = Vec3::new(0.0, 0.0, 1.0);
        let ens = cap_clustered(200, &center, 0.3, 0.1, 5).unwrap();
        assert!(check_admissible(&ens, 1e-14).is_empty());
        for a in &ens.agents {
            assert!(a.x.dot(&center) >= (0.3f64).cos() - 1e-12);
            assert_abs_diff_eq!(a.v.norm(), 0.1, epsilon = 1e-13);
        }
        assert_eq!(ens, cap_clustered(200, &center, 0.3, 0.1, 5).unwrap());
    }

    #[test]
    fn tiny_cap_degenerates_to_its_center() {
        let center = Vec3::new(0.6, 0.0, 0.8);
        let ens = cap_clustered(50, &center, 1e-6, 0.0, 3).unwrap();
        for a in &ens.agents {
            assert!((a.x - center).norm() < 2e-6);
            assert_eq!(a.v, Vec3::zeros());
        }
        assert_eq!(energy(&ens, 0.0).kinetic, 0.0);
    }

    #[test]
    fn cap_rejects_bad_parameters() {
        let c = Vec3::new(0.0, 0.0, 1.0);
        assert!(cap_clustered(0, &c, 0.3, 0.1, 0).is_err());
        assert!(cap_clustered(5, &c, 0.0, 0.1, 0).is_err());
        assert!(cap_clustered(5, &c, 2.0, 0.1, 0).is_err());
        assert!(cap_clustered(5, &Vec3::zeros(), 0.3, 0.1, 0).is_err());
        assert!(cap_clustered(5, &c, 0.3, -1.0, 0).is_err());
    }

    #[test]
    fn tight_cap_with_strong_bonding_meets_the_flocking_condition() {
        let ens = cap_clustered(5, &Vec3::new(0.0, 0.0, 1.0), 0.3, 0.1, 7).unwrap();
        let e0 = energy(&ens, 10.0).total;
        assert!(flocking_condition(5, e0, 10.0), "E(0) = {e0}");
    }

    #[test]
    fn spec_round_trips_through_json() {
        let specs = vec![
            ScenarioSpec::RandomUniform {
                n: 8,
                speed: 1.0,
                seed: Some(3),
            },
            ScenarioSpec::CapClustered {
                n: 5,
                center: Vec3::new(0.0, 0.0, 1.0),
                radius: 0.3,
                speed: 0.1,
                seed: None,
            },
            ScenarioSpec::CircularExact {
                phases: vec![0.0, 1.0],
            },
            ScenarioSpec::AntipodalApproach { t: 0.1 },
        ];
        for spec in specs {
            let json = serde_json::to_string(&spec).unwrap();
            let back: ScenarioSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(spec, back);
        }
        let tagged: ScenarioSpec =
            serde_json::from_str(r#"{"kind": "random-uniform", "n": 4, "speed": 0.5}"#).unwrap();
        assert_eq!(
            tagged,
            ScenarioSpec::RandomUniform {
                n: 4,
                speed: 0.5,
                seed: None
            }
        );
    }

    #[test]
    fn spec_build_seed_precedence() {
        let with_seed = ScenarioSpec::RandomUniform {
            n: 6,
            speed: 0.5,
            seed: Some(7),
        };
        let without = ScenarioSpec::RandomUniform {
            n: 6,
            speed: 0.5,
            seed: None,
        };
        assert_eq!(with_seed.build(123).unwrap(), random_admissible(6, 0.5, 7));
        assert_eq!(without.build(123).unwrap(), random_admissible(6, 0.5, 123));
    }

    #[test]
    fn spec_validation_rejects_bad_phases() {
        let spec = ScenarioSpec::CircularExact {
            phases: vec![0.0, 3.5],
        };
        assert_eq!(
            spec.validate(),
            Err(ScenarioError::Phase {
                index: 1,
                value: 3.5
            })
        );
        assert!(ScenarioSpec::CircularExact { phases: vec![] }.validate().is_err());
    }

    #[test]
    fn spec_agent_counts() {
        assert_eq!(
            ScenarioSpec::CircularExact {
                phases: vec![0.0, 1.0, 2.0]
            }
            .n_agents(),
            3
        );
        assert_eq!(ScenarioSpec::AntipodalApproach { t: 0.2 }.n_agents(), 2);
    }
}
