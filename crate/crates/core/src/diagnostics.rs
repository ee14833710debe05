//! Every scalar the verification suite certifies: energies, the dissipation
//! identity, flocking metrics, antipodal margin, pairwise bounds, and the
//! transport-derivative checks.
//!
//! Conventions for a pair `(i, j)`:
//! - `mid = |x_i + x_j|`, the antipodal margin of the pair (0 = antipodal);
//! - `d = |R_{x_j→x_i} v_j - v_i|`, the transported velocity mismatch,
//!   defined as 0 when `mid <= EPS_ANTIPODAL` (zero extension).
//!
//! Flocking on the sphere means `max mid·d → 0` while `min mid` stays away
//! from zero; both quantities are recorded at every sample.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Ensemble, SimParams};
use crate::geometry::{rotate, rotation_matrix};
use crate::integrator::Trajectory;
use crate::scenarios::random_unit_vector;
use crate::tol;
use crate::weight::CommWeight;

/// Numerical flocking declaration: tail flock metric below this.
pub const FLOCK_METRIC_TOL: f64 = 1e-3;
/// Slack subtracted from the guaranteed antipodal-margin-squared floor.
pub const MARGIN_SLACK: f64 = 1e-6;

/// Per-sample diagnostics row; the serialized timeseries schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub e: f64,
    pub e_k: f64,
    pub e_c: f64,
    pub v_max: f64,
    pub dissipation: f64,
    pub flock_metric: f64,
    pub antipodal_margin: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub total: f64,
    pub kinetic: f64,
    pub bonding: f64,
}

/// `E_K = (1/N) Σ |v_k|^2`, `E_C = (σ/2N^2) Σ_{k,l} |x_k - x_l|^2` over all
/// ordered pairs (the diagonal contributes zero), `E = E_K + E_C`.
pub fn energy(ens: &Ensemble, sigma: f64) -> EnergyBreakdown {
    let n = ens.len() as f64;
    let kinetic = ens.agents.iter().map(|a| a.v.norm_squared()).sum::<f64>() / n;
    let mut pair_sum = 0.0;
    for a in &ens.agents {
        for b in &ens.agents {
            pair_sum += (a.x - b.x).norm_squared();
        }
    }
    let bonding = sigma * pair_sum / (2.0 * n * n);
    EnergyBreakdown {
        total: kinetic + bonding,
        kinetic,
        bonding,
    }
}

/// Transported velocity mismatch of a pair; `None` when the pair sits inside
/// the antipodal cutoff (its contribution to every metric is zero).
fn pair_mismatch(ens: &Ensemble, i: usize, j: usize) -> Option<(f64, f64)> {
    let (xi, vi) = (ens.agents[i].x, ens.agents[i].v);
    let (xj, vj) = (ens.agents[j].x, ens.agents[j].v);
    let mid = (xi + xj).norm();
    if mid <= tol::EPS_ANTIPODAL {
        return None;
    }
    let transported = rotate(&xj, &xi, &vj).expect("non-antipodal pair checked above");
    Some((mid, (transported - vi).norm()))
}

const PAR_MIN_AGENTS: usize = 64;

/// `-(1/N^2) Σ_{i,j} ψ_ij d_ij^2`: the exact rate of energy decrease along
/// solutions (the bonding contributions cancel pairwise). Always <= 0.
pub fn dissipation_rate(ens: &Ensemble, weight: &CommWeight) -> f64 {
    let n = ens.len();
    let row = |i: usize| {
        let mut acc = 0.0;
        for j in 0..n {
            if let Some((_, d)) = pair_mismatch(ens, i, j) {
                let r = (ens.agents[i].x - ens.agents[j].x).norm();
                acc += weight.eval_clamped(r) * d * d;
            }
        }
        acc
    };
    let rows: Vec<f64> = if n >= PAR_MIN_AGENTS {
        (0..n).into_par_iter().map(row).collect()
    } else {
        (0..n).map(row).collect()
    };
    -rows.iter().sum::<f64>() / (n as f64 * n as f64)
}

/// `max_{i,j} mid·d`; zero for a single agent and for purely antipodal pairs.
pub fn flock_metric(ens: &Ensemble) -> f64 {
    let n = ens.len();
    let row = |i: usize| {
        let mut best: f64 = 0.0;
        for j in (i + 1)..n {
            if let Some((mid, d)) = pair_mismatch(ens, i, j) {
                best = best.max(mid * d);
            }
        }
        best
    };
    let rows: Vec<f64> = if n >= PAR_MIN_AGENTS {
        (0..n).into_par_iter().map(row).collect()
    } else {
        (0..n).map(row).collect()
    };
    rows.iter().fold(0.0, |a, b| a.max(*b))
}

/// `min_{i<j} |x_i + x_j|`; 2 for a single agent.
pub fn antipodal_margin(ens: &Ensemble) -> f64 {
    let mut min = 2.0f64;
    for i in 0..ens.len() {
        for j in (i + 1)..ens.len() {
            min = min.min((ens.agents[i].x + ens.agents[j].x).norm());
        }
    }
    min
}

/// `max_{i<j} |x_i - x_j|`.
pub fn diameter(ens: &Ensemble) -> f64 {
    let mut max = 0.0f64;
    for i in 0..ens.len() {
        for j in (i + 1)..ens.len() {
            max = max.max((ens.agents[i].x - ens.agents[j].x).norm());
        }
    }
    max
}

/// Largest agent speed.
pub fn max_speed(ens: &Ensemble) -> f64 {
    ens.agents.iter().map(|a| a.v.norm()).fold(0.0, f64::max)
}

/// Assembles the full per-sample row.
pub fn record(ens: &Ensemble, p: &SimParams) -> DiagnosticsRecord {
    let e = energy(ens, p.sigma);
    DiagnosticsRecord {
        t: ens.t,
        e: e.total,
        e_k: e.kinetic,
        e_c: e.bonding,
        v_max: max_speed(ens),
        dissipation: dissipation_rate(ens, &p.weight),
        flock_metric: flock_metric(ens),
        antipodal_margin: antipodal_margin(ens),
        diameter: diameter(ens),
    }
}

/// Sufficient bonding strength for guaranteed flocking: `σ > N^2 E(0) / 2`.
pub fn flocking_condition(n: usize, e0: f64, sigma: f64) -> bool {
    sigma > (n * n) as f64 * e0 / 2.0
}

/// Pairwise diameter and speed bounds implied by the initial energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub pass: bool,
    pub diameter_bound_sq: f64,
    pub speed_bound_sq: f64,
    pub max_diameter_sq: f64,
    pub max_speed_sq: f64,
    pub worst_diameter_t: f64,
    pub worst_speed_t: f64,
}

/// Slack added to the energy-derived bounds before comparing.
pub const BOUND_SLACK: f64 = 1e-8;

/// Checks `max |x_i - x_j|^2 <= 2 N^2 E(0)/σ` and `max |v_i|^2 <= N E(0)`
/// (each plus [`BOUND_SLACK`]) at every sample. `None` when σ = 0, where no
/// diameter bound exists.
pub fn diameter_bound_check(traj: &Trajectory) -> Option<BoundReport> {
    let sigma = traj.params.sigma;
    if sigma <= 0.0 {
        return None;
    }
    let n = traj.params.n as f64;
    let e0 = traj.samples.first()?.diag.e;
    let diameter_bound_sq = 2.0 * n * n * e0 / sigma;
    let speed_bound_sq = n * e0;
    let mut report = BoundReport {
        pass: true,
        diameter_bound_sq,
        speed_bound_sq,
        max_diameter_sq: 0.0,
        max_speed_sq: 0.0,
        worst_diameter_t: 0.0,
        worst_speed_t: 0.0,
    };
    for s in &traj.samples {
        let d2 = s.diag.diameter * s.diag.diameter;
        if d2 > report.max_diameter_sq {
            report.max_diameter_sq = d2;
            report.worst_diameter_t = s.diag.t;
        }
        let v2 = s.diag.v_max * s.diag.v_max;
        if v2 > report.max_speed_sq {
            report.max_speed_sq = v2;
            report.worst_speed_t = s.diag.t;
        }
    }
    report.pass = report.max_diameter_sq <= diameter_bound_sq + BOUND_SLACK
        && report.max_speed_sq <= speed_bound_sq + BOUND_SLACK;
    Some(report)
}

/// Tail flocking declaration over the final 10% of samples: flock metric
/// below [`FLOCK_METRIC_TOL`] and margin² above `4 - 2N²E(0)/σ - MARGIN_SLACK`.
/// `None` when σ = 0 (no margin floor exists without bonding).
pub fn flocking_declared(traj: &Trajectory) -> Option<bool> {
    let sigma = traj.params.sigma;
    if sigma <= 0.0 || traj.samples.is_empty() {
        return None;
    }
    let n = traj.params.n as f64;
    let e0 = traj.samples[0].diag.e;
    let margin_sq_floor = 4.0 - 2.0 * n * n * e0 / sigma - MARGIN_SLACK;
    let tail_start = traj.samples.len() - (traj.samples.len() / 10).max(1);
    Some(traj.samples[tail_start..].iter().all(|s| {
        s.diag.flock_metric < FLOCK_METRIC_TOL
            && s.diag.antipodal_margin * s.diag.antipodal_margin > margin_sq_floor
    }))
}

/// Worst unit-norm residual `| |x|-1 |` and tangency residual `|⟨x,v⟩|` over
/// all recorded samples and agents. Both stay at rounding level when the
/// projection step does its job.
pub fn constraint_extremes(traj: &Trajectory) -> (f64, f64) {
    let mut norm_res: f64 = 0.0;
    let mut tangency_res: f64 = 0.0;
    for s in &traj.samples {
        for a in &s.ensemble.agents {
            norm_res = norm_res.max((a.x.norm() - 1.0).abs());
            tangency_res = tangency_res.max(a.x.dot(&a.v).abs());
        }
    }
    (norm_res, tangency_res)
}

/// Empirical extremes of `ψ(|x-y|) / |x+y|^2` over random unit pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport {
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

/// Ratio tolerance for the sandwich extremes.
pub const SANDWICH_TOL: f64 = 1e-12;

/// Midpoint-norm floor for the sandwich sampler. Near the antipode both
/// `ψ` and `|x+y|^2` shrink like `m^2` while carrying absolute rounding
/// error of a few ulps of 1, so their quotient picks up noise of order
/// `eps/m^2`: below `m ~ 0.08` that noise alone exceeds [`SANDWICH_TOL`]
/// and the band stops being measurable in doubles. The floor excludes a
/// `m^2/4 ~ 2e-3` fraction of pair space.
pub const SANDWICH_MID_FLOOR: f64 = 0.08;

/// Samples `ψ/|x+y|^2` over seeded random unit pairs with
/// `|x+y| >` [`SANDWICH_MID_FLOOR`]. For the quadratic kind the ratio must
/// equal 1/4 everywhere; for the linear kind it must stay in `[κ/4, κ/2]`;
/// any kind must keep it finite and positive.
pub fn weight_sandwich_check(weight: &CommWeight, samples: usize, seed: u64) -> SandwichReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut drawn = 0;
    while drawn < samples {
        let x = random_unit_vector(&mut rng);
        let y = random_unit_vector(&mut rng);
        let mid_sq = (x + y).norm_squared();
        if mid_sq.sqrt() <= SANDWICH_MID_FLOOR {
            continue;
        }
        let ratio = weight.eval_clamped((x - y).norm()) / mid_sq;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        drawn += 1;
    }
    let pass = match weight {
        CommWeight::Quadratic => (lo - 0.25).abs() <= SANDWICH_TOL && (hi - 0.25).abs() <= SANDWICH_TOL,
        CommWeight::Linear { kappa } => {
            lo >= kappa / 4.0 - SANDWICH_TOL && hi <= kappa / 2.0 + SANDWICH_TOL
        }
        CommWeight::Table { .. } => lo > 0.0 && hi.is_finite(),
    };
    SandwichReport { lo, hi, pass }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WindowError {
    #[error("pair crosses the antipodal cutoff at t = {t}")]
    Antipodal { t: f64 },
    #[error("need at least 3 samples for centered differences, got {0}")]
    TooFewSamples(usize),
    #[error("sample spacing {h} too coarse for finite differencing (need <= 1e-2)")]
    Sparse { h: f64 },
}

struct RateSamples {
    /// Centered-difference `|dR/dt|` (entrywise sup) at interior samples.
    rates: Vec<f64>,
    /// Pair margin `|x_i + x_j|` at the matching interior samples.
    mids: Vec<f64>,
    /// Largest agent speed at each interior sample (the bound's speed factor
    /// is instantaneous, which is what makes its singular term sharp).
    speeds: Vec<f64>,
}

fn rotation_rate_samples(
    traj: &Trajectory,
    pair: (usize, usize),
) -> Result<RateSamples, WindowError> {
    let m = traj.samples.len();
    if m < 3 {
        return Err(WindowError::TooFewSamples(m));
    }
    let h = traj.samples[1].diag.t - traj.samples[0].diag.t;
    if h > 1e-2 {
        return Err(WindowError::Sparse { h });
    }
    let (i, j) = pair;
    let mats: Vec<_> = traj
        .samples
        .iter()
        .map(|s| {
            let xi = s.ensemble.agents[i].x;
            let xj = s.ensemble.agents[j].x;
            rotation_matrix(&xj, &xi).map_err(|_| WindowError::Antipodal { t: s.diag.t })
        })
        .collect::<Result<_, _>>()?;
    let mut out = RateSamples {
        rates: Vec::with_capacity(m - 2),
        mids: Vec::with_capacity(m - 2),
        speeds: Vec::with_capacity(m - 2),
    };
    for k in 1..m - 1 {
        out.rates.push((mats[k + 1] - mats[k - 1]).amax() / (2.0 * h));
        let s = &traj.samples[k];
        out.mids
            .push((s.ensemble.agents[i].x + s.ensemble.agents[j].x).norm());
        out.speeds.push(max_speed(&s.ensemble));
    }
    Ok(out)
}

/// Smallest constant making `|dR/dt| <= C·v(t)·(1 + 1/|x_i+x_j|)` hold at
/// every interior sample, where `v(t)` is the largest agent speed there.
pub fn fit_rotation_rate_constant(
    traj: &Trajectory,
    pair: (usize, usize),
) -> Result<f64, WindowError> {
    let s = rotation_rate_samples(traj, pair)?;
    Ok(s
        .rates
        .iter()
        .zip(s.mids.iter().zip(&s.speeds))
        .map(|(rate, (mid, speed))| rate / (speed * (1.0 + 1.0 / mid)))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationRateReport {
    pub pass: bool,
    pub c_fit: f64,
    /// Largest observed `|dR/dt| / (v(t) (1 + 1/mid))`.
    pub max_ratio: f64,
    /// Largest agent speed seen anywhere in the window (informational).
    pub max_speed: f64,
    /// Observed rate over `c_fit·v(t)/mid` at the sample of smallest margin:
    /// how much of the singular term the data actually realizes there.
    pub singular_term_ratio: f64,
    /// Margin at that sample.
    pub min_mid: f64,
}

/// Verifies `|dR/dt| <= c_fit·v(t)·(1 + 1/|x_i+x_j|)` pointwise by centered
/// differences (`v(t)` the largest agent speed at the sample) and reports how
/// sharply the `1/|x_i+x_j|` term is attained where the pair is closest to
/// antipodal.
pub fn rotation_rate_bound_check(
    traj: &Trajectory,
    pair: (usize, usize),
    c_fit: f64,
) -> Result<RotationRateReport, WindowError> {
    let s = rotation_rate_samples(traj, pair)?;
    let mut max_ratio: f64 = 0.0;
    let mut pass = true;
    let mut min_mid = f64::INFINITY;
    let mut rate_at_min_mid = 0.0;
    let mut speed_at_min_mid = 0.0;
    for (rate, (mid, speed)) in s.rates.iter().zip(s.mids.iter().zip(&s.speeds)) {
        let shape = speed * (1.0 + 1.0 / mid);
        max_ratio = max_ratio.max(rate / shape);
        if *rate > c_fit * shape * (1.0 + 1e-12) {
            pass = false;
        }
        if *mid < min_mid {
            min_mid = *mid;
            rate_at_min_mid = *rate;
            speed_at_min_mid = *speed;
        }
    }
    Ok(RotationRateReport {
        pass,
        c_fit,
        max_ratio,
        max_speed: s.speeds.iter().fold(0.0, |a, b| a.max(*b)),
        singular_term_ratio: rate_at_min_mid / (c_fit * speed_at_min_mid / min_mid),
        min_mid,
    })
}

/// Pairwise metric family `f_k(t) = max_{i<j} mid · d^k`.
pub fn pair_metric_curve(traj: &Trajectory, k: f64) -> Vec<f64> {
    traj.samples
        .iter()
        .map(|s| {
            let ens = &s.ensemble;
            let mut best: f64 = 0.0;
            for i in 0..ens.len() {
                for j in (i + 1)..ens.len() {
                    if let Some((mid, d)) = pair_mismatch(ens, i, j) {
                        best = best.max(mid * d.powf(k));
                    }
                }
            }
            best
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceTail {
    pub k: f64,
    /// Samples on which `f_1 < eps` held.
    pub tail_len: usize,
    pub max_fk_on_tail: f64,
    pub tail_bound: f64,
    /// `f_1^k <= 2^(k-1) f_k` held at every sample (the converse direction).
    pub converse_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub pass: bool,
    pub eps: f64,
    /// `√(N E(0))`: the uniform speed bound along the trajectory.
    pub speed_bound: f64,
    pub tails: Vec<EquivalenceTail>,
}

/// Certifies that the metric family vanishes together: on every sample where
/// `f_1 < eps`, each `f_k` stays below `eps · (2√(N E(0)))^(k-1)`, and
/// conversely `f_1^k <= 2^(k-1) f_k` holds unconditionally (velocities are
/// bounded by `√(N E(0))` and margins by 2, so the two directions pin the
/// family to a common tail).
pub fn metric_equivalence_check(traj: &Trajectory, k_list: &[f64], eps: f64) -> EquivalenceReport {
    let n = traj.params.n as f64;
    let e0 = traj.samples.first().map(|s| s.diag.e).unwrap_or(0.0);
    let speed_bound = (n * e0).sqrt();
    let f1 = pair_metric_curve(traj, 1.0);
    let mut report = EquivalenceReport {
        pass: true,
        eps,
        speed_bound,
        tails: Vec::new(),
    };
    for &k in k_list {
        let fk = pair_metric_curve(traj, k);
        let tail_bound = eps * (2.0 * speed_bound).powf(k - 1.0);
        let mut tail_len = 0;
        let mut max_fk_on_tail: f64 = 0.0;
        let mut converse_ok = true;
        for (a, b) in f1.iter().zip(&fk) {
            if *a < eps {
                tail_len += 1;
                max_fk_on_tail = max_fk_on_tail.max(*b);
            }
            // f_1^k = mid^k d^k = mid^(k-1) · f_k <= 2^(k-1) f_k.
            if a.powf(k) > 2.0f64.powf(k - 1.0) * b * (1.0 + 1e-9) + f64::MIN_POSITIVE {
                converse_ok = false;
            }
        }
        let tail_ok = max_fk_on_tail <= tail_bound;
        report.pass &= tail_ok && converse_ok;
        report.tails.push(EquivalenceTail {
            k,
            tail_len,
            max_fk_on_tail,
            tail_bound,
            converse_ok,
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::AgentState;
    use crate::geometry::Vec3;
    use crate::scenarios::circular_exact;
    use approx::assert_abs_diff_eq;

    fn agent(x: [f64; 3], v: [f64; 3]) -> AgentState {
        AgentState {
            x: Vec3::new(x[0], x[1], x[2]),
            v: Vec3::new(v[0], v[1], v[2]),
        }
    }

    #[test]
    fn energy_two_agents_quarter_phase() {
        let ens = circular_exact(&[0.0, std::f64::consts::FRAC_PI_2], 0.0);
        let e = energy(&ens, 1.0);
        assert_abs_diff_eq!(e.kinetic, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.bonding, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(e.total, 1.5, epsilon = 1e-15);
    }

    #[test]
    fn energy_of_resting_coincident_agents_is_zero() {
        let ens = Ensemble::new(
            vec![
                agent([0.0, 0.0, 1.0], [0.0, 0.0, 0.0]),
                agent([0.0, 0.0, 1.0], [0.0, 0.0, 0.0]),
            ],
            0.0,
        );
        let e = energy(&ens, 4.0);
        assert_eq!((e.total, e.kinetic, e.bonding), (0.0, 0.0, 0.0));
    }

    #[test]
    fn energy_bonding_term_switched_off() {
        let ens = circular_exact(&[0.0, 1.0], 0.3);
        assert_eq!(energy(&ens, 0.0).bonding, 0.0);
    }

    #[test]
    fn circular_ensemble_has_zero_mismatch() {
        // Transport carries every velocity exactly onto every other.
        let ens = circular_exact(&[0.0, 0.9, 2.2], 1.7);
        assert!(dissipation_rate(&ens, &CommWeight::Quadratic).abs() < 1e-28);
        assert!(flock_metric(&ens) < 1e-13);
    }

    #[test]
    fn dissipation_single_agent_is_zero() {
        let ens = Ensemble::new(vec![agent([1.0, 0.0, 0.0], [0.0, 2.0, 0.0])], 0.0);
        assert_eq!(dissipation_rate(&ens, &CommWeight::Quadratic), 0.0);
    }

    #[test]
    fn dissipation_is_nonpositive() {
        let ens = Ensemble::new(
            vec![
                agent([1.0, 0.0, 0.0], [0.0, -0.4, 0.3]),
                agent([0.0, 1.0, 0.0], [0.5, 0.0, 0.0]),
                agent([0.0, 0.0, 1.0], [0.1, 0.2, 0.0]),
            ],
            0.0,
        );
        assert!(dissipation_rate(&ens, &CommWeight::Quadratic) <= 0.0);
    }

    #[test]
    fn flock_metric_trivial_cases() {
        let single = Ensemble::new(vec![agent([1.0, 0.0, 0.0], [0.0, 3.0, 0.0])], 0.0);
        assert_eq!(flock_metric(&single), 0.0);
        // Antipodal pair: metric is zero regardless of velocities.
        let anti = Ensemble::new(
            vec![
                agent([0.0, 0.0, 1.0], [5.0, 0.0, 0.0]),
                agent([0.0, 0.0, -1.0], [0.0, 5.0, 0.0]),
            ],
            0.0,
        );
        assert_eq!(flock_metric(&anti), 0.0);
    }

    #[test]
    fn antipodal_margin_cases() {
        let anti = Ensemble::new(
            vec![
                agent([0.0, 0.0, 1.0], [0.0, 0.0, 0.0]),
                agent([0.0, 0.0, -1.0], [0.0, 0.0, 0.0]),
            ],
            0.0,
        );
        assert_eq!(antipodal_margin(&anti), 0.0);
        let coincident = Ensemble::new(
            vec![
                agent([0.0, 1.0, 0.0], [0.0, 0.0, 0.0]),
                agent([0.0, 1.0, 0.0], [0.0, 0.0, 0.0]),
            ],
            0.0,
        );
        assert_eq!(antipodal_margin(&coincident), 2.0);
        let single = Ensemble::new(vec![agent([1.0, 0.0, 0.0], [0.0, 0.0, 0.0])], 0.0);
        assert_eq!(antipodal_margin(&single), 2.0);
        let quarter = circular_exact(&[0.0, std::f64::consts::FRAC_PI_2], 0.0);
        assert_abs_diff_eq!(
            antipodal_margin(&quarter),
            std::f64::consts::SQRT_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn flocking_condition_threshold() {
        assert!(flocking_condition(2, 1.5, 4.0)); // 4 > 3
        assert!(!flocking_condition(2, 1.5, 3.0)); // boundary is strict
        assert!(!flocking_condition(2, 1.5, 0.0));
        assert!(flocking_condition(7, 0.0, 1e-9)); // zero energy flocks for any σ > 0
    }

    #[test]
    fn sandwich_quadratic_ratio_is_exactly_one_quarter() {
        let rep = weight_sandwich_check(&CommWeight::Quadratic, 2000, 11);
        assert!(rep.pass, "lo = {}, hi = {}", rep.lo, rep.hi);
        assert!((rep.lo - 0.25).abs() <= SANDWICH_TOL);
        assert!((rep.hi - 0.25).abs() <= SANDWICH_TOL);
    }

    #[test]
    fn sandwich_linear_ratio_stays_in_band() {
        let rep = weight_sandwich_check(&CommWeight::Linear { kappa: 1.0 }, 2000, 12);
        assert!(rep.pass, "lo = {}, hi = {}", rep.lo, rep.hi);
        assert!(rep.lo >= 0.25 - SANDWICH_TOL && rep.hi <= 0.5 + SANDWICH_TOL);
    }

    #[test]
    fn sandwich_coincident_pair_ratio() {
        // x = y gives ratio ψ(0)/4 for any kind; spot-check the quadratic value.
        let x = Vec3::new(0.6, 0.0, 0.8);
        let ratio = CommWeight::Quadratic.eval_clamped(0.0) / (x + x).norm_squared();
        assert_abs_diff_eq!(ratio, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn constraint_extremes_stay_at_rounding_level_on_exact_states() {
        let traj = crate::scenarios::antipodal_approach_path(0.05, 0.2, 50).unwrap();
        let (norm_res, tangency_res) = constraint_extremes(&traj);
        assert!(norm_res <= 1e-14, "norm residual {norm_res}");
        assert!(tangency_res <= 1e-14, "tangency residual {tangency_res}");
    }
}
