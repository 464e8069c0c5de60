//! Sampling oracle for ε-normal quotients, tangent membership and subdifferential
//! reconstruction. It shares no code with the exact engine beyond function evaluation and
//! set distances, so agreement between the two is a meaningful check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::funcdsl::lip::{lip_estimate, sample_set_ball};
use crate::funcdsl::PiecewiseFunc;
use crate::interval::{outer_limit_scaled, Interval, IntervalSet, OuterLimit};
use crate::sets::{norm, ClosedSet};
use crate::subdiff::{Exactness, SubdiffKind, SubdiffSet};
use crate::verdict::{Trit, Verdict};

/// Default tolerance for set reconstruction.
pub const RECONSTRUCT_TOL: f64 = 1e-4;
/// Tolerance of the outer-limit extrapolation in [`limiting_estimate`].
pub const LIMIT_TOL: f64 = 1e-3;
/// Candidates per reconstruction grid.
pub const CANDIDATES: usize = 2048;
/// Levels `k = 1..=LEVELS` with `ε_k = r_k = 2^{-k}` in [`limiting_estimate`].
pub const LEVELS: usize = 8;
/// Largest fraction of undecided grid verdicts a reconstruction may contain.
const MAX_UNKNOWN: f64 = 0.05;
/// Points per axis of the deterministic grid in dimension ≥ 2.
const ND_GRID_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("point {0:?} is not in the set and the domain of the function")]
    NotInDomain(Vec<f64>),
    #[error("isolated epigraph point: no non-vertical samples at the smallest radii")]
    IsolatedEpigraphPoint,
    #[error("invalid schedule: {0}")]
    BadSchedule(String),
    #[error("epsilon must be nonnegative, got {0}")]
    NegativeEps(f64),
    #[error("reconstruction works on the line; got dimension {0}")]
    NotOneDimensional(usize),
    #[error("estimation failed: {unknown} of {total} candidate verdicts are undecided")]
    TooManyUnknown { unknown: usize, total: usize },
}

/// Sampling schedule shared by all estimator queries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Schedule {
    /// Strictly decreasing ball radii.
    pub radii: Vec<f64>,
    /// Grid points per dimension.
    pub grid_density: usize,
    /// Heights above the graph, as fractions of the admissible vertical span in the ball.
    pub epi_r_grid: Vec<f64>,
    pub seed: u64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::geometric(1.0, 0.5, 16)
    }
}

impl Schedule {
    /// `r_j = r0·ρ^j` for `j < steps`, with the default density, heights and seed.
    pub fn geometric(r0: f64, rho: f64, steps: usize) -> Schedule {
        Schedule {
            radii: (0..steps).map(|j| r0 * rho.powi(j as i32)).collect(),
            grid_density: 64,
            epi_r_grid: vec![0.0, 1e-6, 1e-3, 1e-1, 1.0],
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), EstimatorError> {
        let bad = |m: &str| Err(EstimatorError::BadSchedule(m.to_string()));
        if self.radii.len() < 3 {
            return bad("at least three radii are needed");
        }
        if self.radii.windows(2).any(|w| w[1] >= w[0]) || self.radii.iter().any(|r| !(*r > 1e-9 && r.is_finite())) {
            return bad("radii must decrease strictly and stay above 1e-9");
        }
        if self.grid_density < 8 {
            return bad("grid density must be at least 8");
        }
        if self.epi_r_grid.is_empty() || self.epi_r_grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return bad("epigraph offsets are fractions in [0, 1]");
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

fn median_last3(v: &[f64]) -> f64 {
    let mut t = v[v.len().saturating_sub(3)..].to_vec();
    t.sort_by(f64::total_cmp);
    t[t.len() / 2]
}

/// Unit directions from `(x̄, f(x̄))` to sampled points of `epi f_Ω`, per radius.
#[derive(Clone, Debug)]
pub struct EpiSample {
    dim: usize,
    /// Flattened unit vectors `(Δx, Δy)/‖·‖` of length `dim + 1`.
    per_radius: Vec<Vec<f64>>,
    non_vertical: Vec<bool>,
}

impl EpiSample {
    pub fn build(f: &PiecewiseFunc, omega: &ClosedSet, xbar: &[f64], sched: &Schedule) -> Result<EpiSample, EstimatorError> {
        sched.validate()?;
        let g = f.restrict(omega);
        let fbar = g.value(xbar);
        if !omega.contains(xbar, 1e-12) || !fbar.is_finite() {
            return Err(EstimatorError::NotInDomain(xbar.to_vec()));
        }
        let n = xbar.len();
        let mut per_radius = Vec::with_capacity(sched.radii.len());
        let mut non_vertical = Vec::with_capacity(sched.radii.len());
        for (j, &r) in sched.radii.iter().enumerate() {
            let mut dirs = Vec::new();
            let mut lateral = false;
            for x in sample_points(omega, xbar, r, sched, j as u64) {
                let dx: Vec<f64> = x.iter().zip(xbar).map(|(a, b)| a - b).collect();
                let ndx = norm(&dx);
                if ndx > r {
                    continue;
                }
                let h = (r * r - ndx * ndx).sqrt();
                let lo = (g.value(&x) - fbar).max(-h);
                if lo.is_nan() || lo > h {
                    continue;
                }
                for &frac in &sched.epi_r_grid {
                    let dy = lo + frac * (h - lo);
                    let len = (ndx * ndx + dy * dy).sqrt();
                    if len == 0.0 {
                        continue;
                    }
                    dirs.extend(dx.iter().map(|v| v / len));
                    dirs.push(dy / len);
                    lateral |= ndx > 0.0;
                }
            }
            per_radius.push(dirs);
            non_vertical.push(lateral);
        }
        Ok(EpiSample { dim: n, per_radius, non_vertical })
    }

    /// Whether the last three radii saw only vertical directions.
    pub fn isolated(&self) -> bool {
        self.non_vertical[self.non_vertical.len().saturating_sub(3)..].iter().all(|b| !b)
    }

    fn radius_quotient(&self, j: usize, xstar: &[f64]) -> f64 {
        let w = self.dim + 1;
        self.per_radius[j]
            .chunks_exact(w)
            .map(|d| d[..self.dim].iter().zip(xstar).map(|(a, b)| a * b).sum::<f64>() - d[self.dim])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest sampled quotient `⟨(x*, −1), w⟩` at each radius.
    pub fn per_radius(&self, xstar: &[f64]) -> Vec<f64> {
        (0..self.per_radius.len()).map(|j| self.radius_quotient(j, xstar)).collect()
    }

    /// Median of the last three per-radius maxima; `−1` (the vertical direction) for an
    /// isolated epigraph point.
    pub fn quotient(&self, xstar: &[f64]) -> f64 {
        if self.isolated() {
            return -1.0;
        }
        let k = self.per_radius.len();
        let tail: Vec<f64> = (k.saturating_sub(3)..k).map(|j| self.radius_quotient(j, xstar)).collect();
        median_last3(&tail)
    }
}

/// `Ω ∩ B(x̄, r)` sample: a jittered grid on the line, a grid plus random points elsewhere;
/// always includes `x̄` and, on the line, the endpoints of `Ω`'s components in the window.
fn sample_points(omega: &ClosedSet, xbar: &[f64], r: f64, sched: &Schedule, stream: u64) -> Vec<Vec<f64>> {
    let mut rng = sched.rng(stream);
    let n = xbar.len();
    if n == 1 {
        let m = sched.grid_density;
        let step = 2.0 * r / (m - 1) as f64;
        let mut pts = vec![vec![xbar[0]]];
        for k in 0..m {
            let jitter = if k == 0 || k + 1 == m { 0.0 } else { rng.random_range(-0.25..0.25) };
            let x = xbar[0] - r + (k as f64 + jitter) * step;
            if omega.contains(&[x], 0.0) {
                pts.push(vec![x]);
            }
        }
        for p in omega.line_preimage(&[0.0], &[1.0]).parts() {
            for e in [p.lo_f64(), p.hi_f64()] {
                if e.is_finite() && (e - xbar[0]).abs() <= r {
                    pts.push(vec![e]);
                }
            }
        }
        return pts;
    }
    let mut pts = sample_set_ball(omega, xbar, r, sched.grid_density.min(ND_GRID_CAP));
    for _ in 0..sched.grid_density {
        let x: Vec<f64> = xbar.iter().map(|c| c + rng.random_range(-r..=r)).collect();
        pts.push(omega.nearest(&x));
    }
    pts
}

/// Sampled `limsup` of the normalized pairing of `(x*, −1)` with `epi f_Ω` at `(x̄, f(x̄))`.
pub fn quotient_limsup_epi(
    f: &PiecewiseFunc,
    omega: &ClosedSet,
    xbar: &[f64],
    xstar: &[f64],
    sched: &Schedule,
) -> Result<f64, EstimatorError> {
    let epi = EpiSample::build(f, omega, xbar, sched)?;
    if epi.isolated() {
        return Err(EstimatorError::IsolatedEpigraphPoint);
    }
    Ok(epi.quotient(xstar))
}

fn tangent_quotient(s: &ClosedSet, xbar: &[f64], v: &[f64], radii: &[f64]) -> f64 {
    let q: Vec<f64> = radii
        .iter()
        .map(|&t| {
            let y: Vec<f64> = xbar.iter().zip(v).map(|(a, b)| a + t * b).collect();
            s.dist(&y) / t
        })
        .collect();
    median_last3(&q)
}

/// Tangency of `v` to `S` at `x̄` from `dist(x̄ + t_j v, S)/t_j` along the radii.
pub fn tangent_member(s: &ClosedSet, xbar: &[f64], v: &[f64], sched: &Schedule, tol: f64) -> Trit {
    Trit::from_margin(-tangent_quotient(s, xbar, v, &sched.radii), tol)
}

/// Membership of `x*` in the ε-regular subdifferential relative to `Ω`.
pub fn member_eps_regular(
    f: &PiecewiseFunc,
    omega: &ClosedSet,
    xbar: &[f64],
    xstar: &[f64],
    eps: f64,
    sched: &Schedule,
    tol: f64,
) -> Result<Trit, EstimatorError> {
    if eps.is_nan() || eps < 0.0 {
        return Err(EstimatorError::NegativeEps(eps));
    }
    let epi = EpiSample::build(f, omega, xbar, sched)?;
    Ok(Trit::from_margin(Probe { epi: &epi, omega, xbar, eps, radii: &sched.radii }.margin(xstar), tol))
}

struct Probe<'a> {
    epi: &'a EpiSample,
    omega: &'a ClosedSet,
    xbar: &'a [f64],
    eps: f64,
    radii: &'a [f64],
}

impl Probe<'_> {
    fn margin(&self, xstar: &[f64]) -> f64 {
        let normal = self.eps - self.epi.quotient(xstar);
        let tangent = -tangent_quotient(self.omega, self.xbar, xstar, self.radii);
        normal.min(tangent)
    }
}

/// One row of the candidate scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateRow {
    pub candidate: f64,
    pub verdict: Verdict,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reconstruction {
    pub result: SubdiffSet,
    /// The set reached the lower or upper end of the candidate window.
    pub left_unbounded: bool,
    pub right_unbounded: bool,
    /// Candidate window `[lo, hi]`.
    pub window: (f64, f64),
    #[serde(skip)]
    pub rows: Vec<CandidateRow>,
}

impl Reconstruction {
    /// The candidate scan as CSV with columns `candidate,verdict,margin`.
    pub fn csv(&self) -> String {
        let mut out = String::from("candidate,verdict,margin\n");
        for r in &self.rows {
            let v = match r.verdict {
                Verdict::In => "in",
                Verdict::Out => "out",
                Verdict::Unknown => "unknown",
            };
            out.push_str(&format!("{},{},{}\n", r.candidate, v, r.margin));
        }
        out
    }
}

/// Reconstructs `∂̂^ε_Ω f(x̄)` on the line from membership tests over a candidate grid.
///
/// The window defaults to `[−M, M]` with `M = max(10, 2·lip)`. The accepted set is the
/// connected run of `in` verdicts around the best margin, its ends refined by bisection to
/// width `≤ tol`; reaching a window end marks that side unbounded.
pub fn reconstruct_1d(
    f: &PiecewiseFunc,
    omega: &ClosedSet,
    xbar: f64,
    eps: f64,
    window: Option<(f64, f64)>,
    sched: &Schedule,
    tol: f64,
) -> Result<Reconstruction, EstimatorError> {
    if f.dim != 1 {
        return Err(EstimatorError::NotOneDimensional(f.dim));
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(EstimatorError::NegativeEps(eps));
    }
    let x = [xbar];
    let epi = EpiSample::build(f, omega, &x, sched)?;
    let (lo, hi) = window.unwrap_or_else(|| {
        let lip = lip_estimate(f, omega, &x, &sched.radii).ok().and_then(|l| l.modulus()).unwrap_or(0.0);
        let m = (2.0 * lip).max(10.0);
        (-m, m)
    });
    let probe = Probe { epi: &epi, omega, xbar: &x, eps, radii: &sched.radii };
    let margin = |s: f64| probe.margin(&[s]);

    let step = (hi - lo) / (CANDIDATES - 1) as f64;
    let grid: Vec<f64> = (0..CANDIDATES).map(|k| lo + k as f64 * step).collect();
    let rows: Vec<CandidateRow> = grid
        .iter()
        .map(|&s| {
            let t = Trit::from_margin(margin(s), tol);
            CandidateRow { candidate: s, verdict: t.verdict, margin: t.margin }
        })
        .collect();
    let unknown = rows.iter().filter(|r| r.verdict == Verdict::Unknown).count();
    if unknown as f64 > MAX_UNKNOWN * CANDIDATES as f64 {
        return Err(EstimatorError::TooManyUnknown { unknown, total: CANDIDATES });
    }

    // maximize the (nearly concave) margin: best grid point, then golden-section refinement
    let best = (0..CANDIDATES).fold(0, |b, k| if rows[k].margin > rows[b].margin { k } else { b });
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(CANDIDATES - 1)]);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let (c, d) = (b - phi * (b - a), a + phi * (b - a));
        if margin(c) >= margin(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let s_star = [0.5 * (a + b), grid[best]].into_iter().fold(f64::NAN, |acc, s| if acc.is_nan() || margin(s) > margin(acc) { s } else { acc });
    let accepted = |s: f64| margin(s) >= -tol;
    let kind = SubdiffKind::EpsRegular { eps };
    let estimated = |set: IntervalSet| SubdiffSet { set, direction: vec![1.0], exactness: Exactness::Estimated { tol }, kind };
    if !accepted(s_star) {
        return Ok(Reconstruction {
            result: estimated(IntervalSet::empty()),
            left_unbounded: false,
            right_unbounded: false,
            window: (lo, hi),
            rows,
        });
    }
    let boundary = |inside: f64, outside: f64| {
        let (mut i, mut o) = (inside, outside);
        while (o - i).abs() > tol / 8.0 {
            let m = 0.5 * (i + o);
            if accepted(m) {
                i = m;
            } else {
                o = m;
            }
        }
        i
    };
    let left_out = grid.iter().rev().find(|&&s| s < s_star && !accepted(s));
    let right_out = grid.iter().find(|&&s| s > s_star && !accepted(s));
    let left = left_out.map(|&o| boundary(s_star, o));
    let right = right_out.map(|&o| boundary(s_star, o));
    let set = Interval::new(left.unwrap_or(f64::NEG_INFINITY), right.unwrap_or(f64::INFINITY), true, true)
        .map_or_else(IntervalSet::empty, IntervalSet::single);
    Ok(Reconstruction {
        result: estimated(set),
        left_unbounded: left.is_none(),
        right_unbounded: right.is_none(),
        window: (lo, hi),
        rows,
    })
}

/// How the sequence `x_k` approaches `x̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    Stationary,
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeTrace {
    pub approach: Approach,
    /// `(x_k, ε_k-regular set at x_k)` per level; missing when the mode has no admissible
    /// point at some level.
    pub levels: Vec<(f64, IntervalSet)>,
    pub limit: Option<IntervalSet>,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitingEstimate {
    pub result: SubdiffSet,
    pub modes: Vec<ModeTrace>,
}

/// `x̄ ± r·2^{-m}` for the smallest `m` landing in `Ω` with `|f(x) − f(x̄)| ≤ r`.
fn approach_point(g: &PiecewiseFunc, omega: &ClosedSet, xbar: f64, fbar: f64, r: f64, sign: f64) -> Option<f64> {
    (0..40).map(|m| xbar + sign * r * 0.5f64.powi(m)).find(|&x| {
        let v = g.value(&[x]);
        omega.contains(&[x], 0.0) && v.is_finite() && (v - fbar).abs() <= r
    })
}

/// Sampled limiting subdifferential relative to `Ω`: for `k = 1..=K`, `ε_k = r_k = 2^{-k}`,
/// reconstructs the `ε_k`-regular relative set at `x_k` for the stationary, left and right
/// approaches, takes each approach's outer limit in `r_k`, and returns the union.
pub fn limiting_estimate(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64, sched: &Schedule) -> Result<LimitingEstimate, EstimatorError> {
    if f.dim != 1 {
        return Err(EstimatorError::NotOneDimensional(f.dim));
    }
    let g = f.restrict(omega);
    let fbar = g.value(&[xbar]);
    if !omega.contains(&[xbar], 1e-12) || !fbar.is_finite() {
        return Err(EstimatorError::NotInDomain(vec![xbar]));
    }
    let window = {
        let lip = lip_estimate(f, omega, &[xbar], &sched.radii).ok().and_then(|l| l.modulus()).unwrap_or(0.0);
        let m = (2.0 * lip).max(10.0);
        (-m, m)
    };
    let mut modes = Vec::new();
    let mut union = IntervalSet::empty();
    for (approach, sign) in [(Approach::Stationary, 0.0), (Approach::Left, -1.0), (Approach::Right, 1.0)] {
        let mut levels = Vec::new();
        let mut seq = Vec::new();
        for k in 1..=LEVELS {
            let r = 0.5f64.powi(k as i32);
            let xk = if sign == 0.0 { Some(xbar) } else { approach_point(&g, omega, xbar, fbar, r, sign) };
            let Some(xk) = xk else {
                levels.clear();
                break;
            };
            let rec = reconstruct_1d(f, omega, xk, r, Some(window), sched, RECONSTRUCT_TOL)?;
            levels.push((xk, rec.result.set.clone()));
            seq.push((r, rec.result.set));
        }
        if levels.is_empty() {
            modes.push(ModeTrace { approach, levels, limit: None, converged: false });
            continue;
        }
        let (limit, converged) = match outer_limit_scaled(&seq, LIMIT_TOL) {
            OuterLimit::Converged(s) => (s, true),
            OuterLimit::Inconclusive { raw, .. } => (raw.last().map(|(_, s)| s.clone()).unwrap_or_default(), false),
        };
        union = union.union(&limit);
        modes.push(ModeTrace { approach, levels, limit: Some(limit), converged });
    }
    let result = SubdiffSet {
        set: union,
        direction: vec![1.0],
        exactness: Exactness::Estimated { tol: LIMIT_TOL },
        kind: SubdiffKind::LimitingRelative,
    };
    Ok(LimitingEstimate { result, modes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: &str) -> ClosedSet {
        ClosedSet::interval_1d(s.parse().unwrap()).unwrap()
    }

    fn func(src: &str) -> PiecewiseFunc {
        PiecewiseFunc::formula(1, src).unwrap()
    }

    fn e1() -> PiecewiseFunc {
        PiecewiseFunc::from_source(1, &[("x < 0", "-inf"), ("x = 0", "0")], "inf", &Default::default()).unwrap()
    }

    #[test]
    fn schedule_validation() {
        assert!(Schedule::default().validate().is_ok());
        let mut s = Schedule::default();
        s.radii = vec![1.0, 1.0, 0.5];
        assert!(s.validate().is_err());
        s = Schedule::default();
        s.grid_density = 4;
        assert!(s.validate().is_err());
    }

    #[test]
    fn quotient_examples() {
        let s = Schedule::default();
        let cube = func("x^3/3");
        let q = quotient_limsup_epi(&cube, &iv("[0, 1]"), &[0.5], &[0.25], &s).unwrap();
        assert!(q.abs() < 1e-3, "{q}");
        let q = quotient_limsup_epi(&cube, &iv("[0, 1]"), &[0.5], &[1.25], &s).unwrap();
        assert!(q > 0.2, "{q}");
        // x* = 0 at the minimizer 0 of x² gives a nonpositive quotient
        let q = quotient_limsup_epi(&func("x^2"), &iv("[-1, 1]"), &[0.0], &[0.0], &s).unwrap();
        assert!(q <= 1e-4, "{q}");
        assert_eq!(quotient_limsup_epi(&e1(), &iv("[0, inf)"), &[0.0], &[1.0], &s), Err(EstimatorError::IsolatedEpigraphPoint));
    }

    #[test]
    fn membership_examples() {
        let s = Schedule::default();
        let half = iv("[0, inf)");
        for eps in [0.0, 0.3, 1.0] {
            assert!(member_eps_regular(&e1(), &half, &[0.0], &[5.0], eps, &s, 1e-6).unwrap().is_in());
        }
        assert!(member_eps_regular(&e1(), &half, &[0.0], &[-0.5], 0.0, &s, 1e-6).unwrap().is_out());
        assert!(member_eps_regular(&func("x^2"), &iv("[-1, 1]"), &[0.0], &[0.0], 0.0, &s, 1e-4).unwrap().is_in());
    }

    #[test]
    fn tangent_examples() {
        let s = Schedule::default();
        let c = iv("[-0.5, 0]");
        assert!(tangent_member(&c, &[0.0], &[-1.0], &s, 1e-9).is_in());
        let t = tangent_member(&c, &[0.0], &[1.0], &s, 1e-9);
        assert!(t.is_out() && (t.margin + 1.0).abs() < 1e-12);
        assert!(tangent_member(&c, &[-0.25], &[0.0], &s, 0.0).is_in());
    }

    #[test]
    fn reconstruct_examples() {
        let s = Schedule::default();
        let tol = RECONSTRUCT_TOL;
        let e2 = reconstruct_1d(&func("-abs(x)"), &iv("(-inf, 0]"), 0.0, 0.0, None, &s, tol).unwrap();
        assert!(e2.result.set.is_empty());
        let r = reconstruct_1d(&e1(), &iv("[0, inf)"), 0.0, 0.25, None, &s, tol).unwrap();
        assert!(r.right_unbounded && !r.left_unbounded);
        assert!(r.result.set.inf().unwrap().to_f64().abs() <= tol);
        let r = reconstruct_1d(&func("x^3/3"), &iv("[0, 1]"), 0.5, 0.0, None, &s, tol).unwrap();
        let p = &r.result.set.parts()[0];
        assert!(p.hi_f64() - p.lo_f64() <= 2.0 * tol * (1.0 + 0.25f64 * 0.25).sqrt() + 1e-9);
        assert!(r.result.set.dist(0.25) == 0.0);
        assert!(r.csv().lines().count() == CANDIDATES + 1);
    }

    #[test]
    fn limiting_examples() {
        let s = Schedule::default();
        let near = |got: &IntervalSet, want: &str| {
            let w: IntervalSet = want.parse().unwrap();
            assert!(got.hausdorff_bounded(&w, 100.0) <= 1e-3, "{got} vs {want}");
        };
        near(&limiting_estimate(&func("-abs(x)"), &iv("(-inf, 0]"), 0.0, &s).unwrap().result.set, "{1}");
        near(&limiting_estimate(&func("exp(x) - 1"), &iv("(-inf, 0]"), 0.0, &s).unwrap().result.set, "{1}");
        near(&limiting_estimate(&func("x^3/3"), &iv("[0, 1]"), 0.0, &s).unwrap().result.set, "{0}");
    }

    #[test]
    fn determinism() {
        let mut s = Schedule::default();
        s.seed = 7;
        let f = func("abs(x) - x^2");
        let a = reconstruct_1d(&f, &iv("[-1, 1]"), 0.0, 0.1, None, &s, 1e-4).unwrap();
        let b = reconstruct_1d(&f, &iv("[-1, 1]"), 0.0, 0.1, None, &s, 1e-4).unwrap();
        assert_eq!(a, b);
    }
}
