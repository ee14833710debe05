//! Communication weights: decreasing functions of pairwise distance on [0, 2]
//! that vanish at distance 2 with strictly negative terminal slope.
//!
//! Those two boundary properties are what make the interaction total on the
//! sphere: distance 2 means an antipodal pair, where transport is undefined,
//! and the weight dominating `|x1 + x2|^2` lets the zero extension stay
//! Lipschitz. Concretely, for unit vectors `|x−y|^2 + |x+y|^2 = 4`, so the
//! quadratic kind satisfies `ψ(|x−y|) = |x+y|^2 / 4` exactly, and the linear
//! kind is sandwiched between `κ|x+y|^2/4` and `κ|x+y|^2/2`.

use serde::{Deserialize, Serialize};

/// Half-width of the accepted overshoot window around the domain [0, 2].
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightError {
    #[error("distance {r} outside [0 - {slack:.0e}, 2 + {slack:.0e}]", slack = DOMAIN_SLACK)]
    Domain { r: f64 },
    #[error("invalid weight table: {reason}")]
    InvalidTable { reason: String },
}

/// Weight family. All kinds are nonnegative and decreasing on [0, 2] with
/// value 0 and negative slope at 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CommWeight {
    /// `(4 - r^2) / 4`; the default. Turns the sandwich bound into an
    /// identity: `ψ(|x−y|) = |x+y|^2/4` for unit vectors.
    Quadratic,
    /// `κ (2 - r)` with `κ > 0`.
    Linear { kappa: f64 },
    /// Piecewise-linear interpolation of `(r, ψ)` knots from (0, ψ₀) to (2, 0).
    #[serde(rename = "custom-table")]
    Table { knots: Vec<[f64; 2]> },
}

impl Default for CommWeight {
    fn default() -> Self {
        CommWeight::Quadratic
    }
}

impl CommWeight {
    /// Validated table construction; serde paths should call [`Self::validate`].
    pub fn table(knots: Vec<[f64; 2]>) -> Result<Self, WeightError> {
        let w = CommWeight::Table { knots };
        w.validate()?;
        Ok(w)
    }

    /// Checks the defining properties (domain endpoints, monotone decrease,
    /// terminal zero with negative slope, nonnegativity).
    pub fn validate(&self) -> Result<(), WeightError> {
        match self {
            CommWeight::Quadratic => Ok(()),
            CommWeight::Linear { kappa } => {
                if kappa.is_finite() && *kappa > 0.0 {
                    Ok(())
                } else {
                    Err(WeightError::InvalidTable {
                        reason: format!("linear scale must be finite and positive, got {kappa}"),
                    })
                }
            }
            CommWeight::Table { knots } => validate_table(knots),
        }
    }

    /// Evaluation on the admissible domain: distances within `±1e-12` of
    /// [0, 2] are clamped, anything further out is an error.
    pub fn eval(&self, r: f64) -> Result<f64, WeightError> {
        if !r.is_finite() || r < -DOMAIN_SLACK || r > 2.0 + DOMAIN_SLACK {
            return Err(WeightError::Domain { r });
        }
        Ok(self.eval_clamped(r))
    }

    /// Total evaluation that saturates `r` into [0, 2].
    ///
    /// Force and diagnostic paths use this: distances computed from
    /// approximately-unit positions overshoot 2 by rounding (and by O(dt^2)
    /// at integrator stage states), and a negative quadratic weight would
    /// break the dissipation sign. ψ is extended by zero past 2, so
    /// saturation is the continuous choice.
    pub fn eval_clamped(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, 2.0);
        match self {
            CommWeight::Quadratic => (4.0 - r * r) / 4.0,
            CommWeight::Linear { kappa } => kappa * (2.0 - r),
            CommWeight::Table { knots } => eval_table(knots, r),
        }
    }

    /// Derivative dψ/dr on [0, 2] (right-continuous at interior table knots).
    pub fn derivative(&self, r: f64) -> Result<f64, WeightError> {
        if !r.is_finite() || r < -DOMAIN_SLACK || r > 2.0 + DOMAIN_SLACK {
            return Err(WeightError::Domain { r });
        }
        let r = r.clamp(0.0, 2.0);
        Ok(match self {
            CommWeight::Quadratic => -r / 2.0,
            CommWeight::Linear { kappa } => -kappa,
            CommWeight::Table { knots } => table_slope(knots, r),
        })
    }
}

fn validate_table(knots: &[[f64; 2]]) -> Result<(), WeightError> {
    let fail = |reason: String| Err(WeightError::InvalidTable { reason });
    if knots.len() < 2 {
        return fail("need at least two knots".into());
    }
    if knots.iter().flatten().any(|v| !v.is_finite()) {
        return fail("non-finite entry".into());
    }
    if knots[0][0] != 0.0 {
        return fail(format!("first knot must sit at r = 0, got {}", knots[0][0]));
    }
    let last = knots[knots.len() - 1];
    if last != [2.0, 0.0] {
        return fail(format!("last knot must be (2, 0), got ({}, {})", last[0], last[1]));
    }
    for pair in knots.windows(2) {
        let ([r0, p0], [r1, p1]) = (pair[0], pair[1]);
        if r1 <= r0 {
            return fail(format!("knot distances must increase: {r0} then {r1}"));
        }
        if p1 > p0 {
            return fail(format!("values must not increase: {p0} then {p1}"));
        }
    }
    if knots.iter().any(|[_, p]| *p < 0.0) {
        return fail("negative value".into());
    }
    let [[r0, p0], [r1, p1]] = [knots[knots.len() - 2], last];
    if (p1 - p0) / (r1 - r0) >= 0.0 {
        return fail("terminal slope must be negative".into());
    }
    Ok(())
}

fn eval_table(knots: &[[f64; 2]], r: f64) -> f64 {
    let seg = knots.windows(2).find(|pair| r <= pair[1][0]).unwrap_or_else(|| {
        &knots[knots.len() - 2..]
    });
    let ([r0, p0], [r1, p1]) = (seg[0], seg[1]);
    p0 + (p1 - p0) * (r - r0) / (r1 - r0)
}

fn table_slope(knots: &[[f64; 2]], r: f64) -> f64 {
    let seg = knots
        .windows(2)
        .find(|pair| r < pair[1][0])
        .unwrap_or_else(|| &knots[knots.len() - 2..]);
    let ([r0, p0], [r1, p1]) = (seg[0], seg[1]);
    (p1 - p0) / (r1 - r0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_boundary_values() {
        let w = CommWeight::Quadratic;
        assert_eq!(w.eval(0.0).unwrap(), 1.0);
        assert_eq!(w.eval(2.0).unwrap(), 0.0);
        assert_eq!(w.derivative(2.0).unwrap(), -1.0);
    }

    #[test]
    fn linear_unit_scale_values() {
        let w = CommWeight::Linear { kappa: 1.0 };
        assert_eq!(w.eval(1.0).unwrap(), 1.0);
        assert_eq!(w.eval(2.0).unwrap(), 0.0);
        assert_eq!(w.derivative(0.7).unwrap(), -1.0);
    }

    #[test]
    fn domain_window_clamps_then_rejects() {
        let w = CommWeight::Quadratic;
        assert_eq!(w.eval(2.0 + 1e-13).unwrap(), 0.0);
        assert_eq!(w.eval(-1e-13).unwrap(), 1.0);
        assert!(matches!(w.eval(2.0 + 1e-9), Err(WeightError::Domain { .. })));
        assert!(matches!(w.eval(-1e-9), Err(WeightError::Domain { .. })));
        assert!(w.eval(f64::NAN).is_err());
        // Saturating evaluation stays total for force paths.
        assert_eq!(w.eval_clamped(2.0 + 1e-6), 0.0);
    }

    #[test]
    fn table_interpolates_and_validates() {
        let w = CommWeight::table(vec![[0.0, 1.0], [1.0, 0.5], [2.0, 0.0]]).unwrap();
        assert_eq!(w.eval(0.5).unwrap(), 0.75);
        assert_eq!(w.eval(1.5).unwrap(), 0.25);
        assert_eq!(w.eval(2.0).unwrap(), 0.0);
        assert_eq!(w.derivative(1.25).unwrap(), -0.5);

        assert!(CommWeight::table(vec![[0.0, 1.0], [2.0, 0.1]]).is_err()); // not zero at 2
        assert!(CommWeight::table(vec![[0.1, 1.0], [2.0, 0.0]]).is_err()); // starts late
        assert!(CommWeight::table(vec![[0.0, 0.2], [1.0, 0.6], [2.0, 0.0]]).is_err()); // bump
        assert!(CommWeight::table(vec![[0.0, 1.0], [1.0, 0.0], [2.0, 0.0]]).is_err()); // flat tail
    }

    #[test]
    fn linear_scale_must_be_positive() {
        assert!(CommWeight::Linear { kappa: 0.0 }.validate().is_err());
        assert!(CommWeight::Linear { kappa: -1.0 }.validate().is_err());
        assert!(CommWeight::Linear { kappa: 0.5 }.validate().is_ok());
    }

    #[test]
    fn serde_round_trip_of_all_kinds() {
        for w in [
            CommWeight::Quadratic,
            CommWeight::Linear { kappa: 0.75 },
            CommWeight::table(vec![[0.0, 1.0], [2.0, 0.0]]).unwrap(),
        ] {
            let text = serde_json::to_string(&w).unwrap();
            let back: CommWeight = serde_json::from_str(&text).unwrap();
            assert_eq!(back, w);
        }
        let quad: CommWeight = serde_json::from_str(r#"{"kind":"quadratic"}"#).unwrap();
        assert_eq!(quad, CommWeight::Quadratic);
    }
}
