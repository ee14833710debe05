//! Simulation and certification toolkit for velocity-aligned flocking on the
//! unit sphere.
//!
//! Agents live on S^2 with tangent velocities. Each one feels a centripetal
//! force that keeps it on the sphere, an alignment force that compares its
//! velocity against neighbors' velocities transported along the connecting
//! rotation, and an optional bonding attraction toward the rest of the
//! ensemble. The library integrates this system with a fixed-step projected
//! RK4 scheme and ships the diagnostics needed to certify its structural
//! facts numerically: the total energy never increases and its exact
//! dissipation rate is reproduced by finite differences; unit norms and
//! tangency are preserved; sufficiently strong bonding forces velocity
//! alignment while keeping every pair away from antipodality.
//!
//! Module map:
//! - [`geometry`]: the sphere primitives, chiefly the rotation that carries
//!   one tangent plane onto another;
//! - [`weight`]: communication weight kinds and their shared floor/ceiling
//!   in terms of the pair margin;
//! - [`dynamics`]: the right-hand side assembled from the three forces;
//! - [`integrator`]: projected RK4, admissibility checks, trajectories;
//! - [`diagnostics`]: energies, dissipation, flocking metrics, bound checks;
//! - [`scenarios`]: seeded generators and closed-form reference paths;
//! - [`tol`]: the numeric cutoffs shared across modules.

pub mod diagnostics;
pub mod dynamics;
pub mod geometry;
pub mod integrator;
pub mod scenarios;
pub mod tol;
pub mod weight;

pub use diagnostics::DiagnosticsRecord;
pub use dynamics::{AgentState, Ensemble, SimParams};
pub use geometry::{AntipodalError, Mat3, Vec3};
pub use integrator::{simulate, Sample, SimulateError, Trajectory};
pub use scenarios::ScenarioSpec;
pub use weight::CommWeight;
