//! Rotations between points of the unit sphere and tangent-space utilities.
//!
//! `rotation_matrix(x1, x2)` is the unique rotation that fixes `x1 × x2` and
//! carries `x1` to `x2` along their great circle; applied to tangent vectors
//! it realizes parallel transport between the two base points. It is
//! undefined for antipodal pairs, and every consumer that must stay total
//! goes through [`weighted_transport`], which extends the weighted operator
//! by zero there.
//!
//! All operations are pure; none normalize their inputs. Callers keep
//! positions on the sphere (see the integrator's projection step).

use nalgebra::{Matrix3, Vector3};

use crate::tol;
use crate::weight::CommWeight;

/// Position or tangent vector in ambient 3-space.
pub type Vec3 = Vector3<f64>;
/// 3×3 real matrix; `Matrix3::new` takes entries in row-major order.
pub type Mat3 = Matrix3<f64>;

/// Rotation requested for an antipodal pair, where it is undefined.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("antipodal pair: |x1 + x2| = {midpoint_norm:.3e} <= {threshold:.3e}, rotation undefined")]
pub struct AntipodalError {
    pub midpoint_norm: f64,
    pub threshold: f64,
}

/// Inputs must be approximately unit; the integrator's stage states drift
/// O(dt^2) off the sphere, so only gross misuse is rejected.
fn debug_check_unit(x: &Vec3) {
    debug_assert!(
        (x.norm() - 1.0).abs() < 1e-3,
        "rotation input far off the unit sphere: |x| = {}",
        x.norm()
    );
}

/// Removes the component of `v` along `x`: returns `v - <v,x>x`.
///
/// For unit `x` the result is tangent at `x` up to rounding.
pub fn tangent_project(x: &Vec3, v: &Vec3) -> Vec3 {
    v - x * v.dot(x)
}

/// Rotation carrying `x1` to `x2` along their great circle, fixing `x1 × x2`.
///
/// Returns the identity when the points coincide within [`tol::EPS_COINCIDENT`]
/// and an error when `|x1 + x2| <=` [`tol::EPS_ANTIPODAL`].
pub fn rotation_matrix(x1: &Vec3, x2: &Vec3) -> Result<Mat3, AntipodalError> {
    debug_check_unit(x1);
    debug_check_unit(x2);
    if (x1 - x2).norm() <= tol::EPS_COINCIDENT {
        return Ok(Mat3::identity());
    }
    let midpoint_norm = (x1 + x2).norm();
    if midpoint_norm <= tol::EPS_ANTIPODAL {
        return Err(AntipodalError {
            midpoint_norm,
            threshold: tol::EPS_ANTIPODAL,
        });
    }
    let c = x1.dot(x2);
    let w = x1.cross(x2);
    // |x1 × x2| = |x1 - x2| |x1 + x2| / 2 for unit vectors, so u stays
    // well-conditioned all the way down to the coincident branch.
    let u = w / w.norm();
    Ok(Mat3::identity() * c - x1 * x2.transpose() + x2 * x1.transpose()
        + (u * u.transpose()) * (1.0 - c))
}

/// Same rotation via the axis-angle form: `cosθ I + sinθ [u]ₓ + (1−cosθ) uuᵀ`.
///
/// Agrees with [`rotation_matrix`] entrywise to rounding; kept as an
/// independent formula for cross-checking.
pub fn rotation_matrix_rodrigues(x1: &Vec3, x2: &Vec3) -> Result<Mat3, AntipodalError> {
    debug_check_unit(x1);
    debug_check_unit(x2);
    if (x1 - x2).norm() <= tol::EPS_COINCIDENT {
        return Ok(Mat3::identity());
    }
    let midpoint_norm = (x1 + x2).norm();
    if midpoint_norm <= tol::EPS_ANTIPODAL {
        return Err(AntipodalError {
            midpoint_norm,
            threshold: tol::EPS_ANTIPODAL,
        });
    }
    let cos_t = x1.dot(x2).clamp(-1.0, 1.0);
    let w = x1.cross(x2);
    let sin_t = w.norm();
    let u = w / sin_t;
    let cross = Mat3::new(0.0, -u.z, u.y, u.z, 0.0, -u.x, -u.y, u.x, 0.0);
    Ok(Mat3::identity() * cos_t + cross * sin_t + (u * u.transpose()) * (1.0 - cos_t))
}

/// Applies the rotation carrying `x1` to `x2` to the vector `v`.
///
/// Preserves `|v|`; maps `x1 ↦ x2`, `x2 ↦ 2<x1,x2>x2 − x1`, and fixes `x1 × x2`.
pub fn rotate(x1: &Vec3, x2: &Vec3, v: &Vec3) -> Result<Vec3, AntipodalError> {
    Ok(rotation_matrix(x1, x2)? * v)
}

/// Weighted transport `ψ(|x1−x2|) · R(x2→x1) v`, extended by zero at
/// antipodal pairs.
///
/// This is the only rotation entry point the force evaluation uses: the
/// weight vanishes quadratically in `|x1+x2|`, so the zero extension is the
/// continuous one and the result is total on (approximately) unit inputs.
pub fn weighted_transport(x1: &Vec3, x2: &Vec3, v: &Vec3, weight: &CommWeight) -> Vec3 {
    if (x1 + x2).norm() <= tol::EPS_ANTIPODAL {
        return Vec3::zeros();
    }
    let r = (x1 - x2).norm();
    let psi = weight.eval_clamped(r);
    let transported = rotate(x2, x1, v).expect("non-antipodal pair checked above");
    transported * psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    #[test]
    fn tangent_project_drops_normal_component() {
        let p = tangent_project(&v(0.0, 0.0, 1.0), &v(1.0, 2.0, 3.0));
        assert_eq!(p, v(1.0, 2.0, 0.0));
    }

    #[test]
    fn tangent_project_of_parallel_vector_is_zero() {
        let p = tangent_project(&v(1.0, 0.0, 0.0), &v(5.0, 0.0, 0.0));
        assert_eq!(p, v(0.0, 0.0, 0.0));
    }

    #[test]
    fn rotation_of_coincident_points_is_identity() {
        let x = v(1.0, 0.0, 0.0);
        assert_eq!(rotation_matrix(&x, &x).unwrap(), Mat3::identity());
        assert_eq!(rotation_matrix_rodrigues(&x, &x).unwrap(), Mat3::identity());
    }

    #[test]
    fn quarter_turn_matches_hand_matrix() {
        let r = rotation_matrix(&v(1.0, 0.0, 0.0), &v(0.0, 1.0, 0.0)).unwrap();
        let expected = Mat3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert_abs_diff_eq!(r, expected, epsilon = 1e-15);
        let rr = rotation_matrix_rodrigues(&v(1.0, 0.0, 0.0), &v(0.0, 1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(rr, expected, epsilon = 1e-15);
    }

    #[test]
    fn rotate_carries_first_point_to_second() {
        let x1 = v(1.0, 0.0, 0.0);
        let x2 = v(0.0, 1.0, 0.0);
        // R x2 = 2<x1,x2> x2 - x1, which is (-1, 0, 0) for this orthogonal pair.
        assert_abs_diff_eq!(rotate(&x1, &x2, &x1).unwrap(), x2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            rotate(&x1, &x2, &x2).unwrap(),
            v(-1.0, 0.0, 0.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn rotation_fixes_the_cross_axis() {
        let x1 = v(1.0, 0.0, 0.0);
        let x2 = (v(0.3, 0.8, 0.5)).normalize();
        let axis = x1.cross(&x2);
        assert_abs_diff_eq!(rotate(&x1, &x2, &axis).unwrap(), axis, epsilon = 1e-14);
    }

    #[test]
    fn antipodal_pair_is_rejected() {
        let x = v(0.0, 0.0, 1.0);
        let err = rotation_matrix(&x, &-x).unwrap_err();
        assert!(err.midpoint_norm <= tol::EPS_ANTIPODAL);
        assert!(rotation_matrix_rodrigues(&x, &-x).is_err());
        assert!(rotate(&x, &-x, &v(1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn rotation_tends_to_identity_at_coincidence() {
        // |R - I| is O(|x1 - x2|) down to the coincident branch.
        for gap in [1e-3, 1e-6, 1e-9] {
            let x1 = v(0.0, 0.0, 1.0);
            let x2 = v(gap, 0.0, (1.0 - gap * gap).sqrt());
            let r = rotation_matrix(&x1, &x2).unwrap();
            let dev = (r - Mat3::identity()).amax();
            assert!(dev < 2.0 * gap, "gap {gap}: |R - I| = {dev}");
        }
    }

    #[test]
    fn weighted_transport_is_zero_at_antipodal_pair() {
        let x = v(1.0, 0.0, 0.0);
        let out = weighted_transport(&x, &-x, &v(0.0, 3.0, 0.0), &CommWeight::Quadratic);
        assert_eq!(out, Vec3::zeros());
    }

    #[test]
    fn weighted_transport_at_coincidence_is_identity_times_weight() {
        let x = v(0.0, 1.0, 0.0);
        let vel = v(1.0, 0.0, 2.0);
        // Quadratic weight has value 1 at distance 0.
        let out = weighted_transport(&x, &x, &vel, &CommWeight::Quadratic);
        assert_eq!(out, vel);
    }

    #[test]
    fn weighted_transport_vanishes_quadratically_near_antipode() {
        // Along a great circle into the antipode, |T| <= |x1+x2|^2 |v| / 2.
        let x1 = v(0.0, 0.0, 1.0);
        let vel = v(0.7, -0.2, 0.0);
        for eps in [1e-2, 1e-4, 1e-6] {
            let theta = std::f64::consts::PI - eps;
            let x2 = v(theta.sin(), 0.0, theta.cos());
            let mid = (x1 + x2).norm();
            let out = weighted_transport(&x1, &x2, &vel, &CommWeight::Quadratic).norm();
            assert!(
                out <= 0.5 * mid * mid * vel.norm(),
                "eps {eps}: |T| = {out}, bound = {}",
                0.5 * mid * mid * vel.norm()
            );
        }
    }
}
