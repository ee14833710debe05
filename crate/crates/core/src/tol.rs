//! Numerical cutoffs shared by geometry, dynamics, and the integrator.
//!
//! These are not tuning knobs. Each constant defines where a branch of the
//! model switches (antipodal zero-extension, coincident identity transport)
//! or how tightly an invariant is enforced, and the verification suite pins
//! behavior at exactly these values.

/// Pairs with `|x1 + x2| <= EPS_ANTIPODAL` are treated as antipodal.
///
/// The rotation between such points is undefined (every great circle through
/// them is a geodesic), and the weighted transport is extended by zero there.
/// The weight itself is O(|x1 + x2|^2), so the extension is continuous and
/// the cutoff only regularizes floating-point noise.
pub const EPS_ANTIPODAL: f64 = 1e-8;

/// Pairs with `|x1 - x2| <= EPS_COINCIDENT` use the identity rotation.
///
/// The rotation tends to the identity as the points merge; below this
/// separation the normalized cross product would divide by ~0 for no gain.
pub const EPS_COINCIDENT: f64 = 1e-12;

/// Unit-norm / tangency tolerance for admissibility of user-supplied states.
///
/// Matches the drift the projected integrator leaves after a step, so any
/// recorded sample is re-admissible as an initial condition.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// Admissibility residual guaranteed immediately after constraint projection.
pub const PROJECTION_TOL: f64 = 1e-14;

/// A position norm at or below this radius aborts the run as a blowup.
///
/// The flow preserves unit norms; reaching half radius means the step loop
/// has lost the manifold entirely (bad dt, corrupted state, non-finite data).
pub const BLOWUP_RADIUS: f64 = 0.5;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoffs_are_ordered() {
        // The coincident branch must engage far below the antipodal cutoff,
        // and both sit below the admissibility tolerance scale.
        assert!(EPS_COINCIDENT < EPS_ANTIPODAL);
        assert!(EPS_ANTIPODAL < UNIT_NORM_TOL * 1e2);
        assert!(PROJECTION_TOL < UNIT_NORM_TOL);
        assert!(BLOWUP_RADIUS > 0.0 && BLOWUP_RADIUS < 1.0);
    }
}
