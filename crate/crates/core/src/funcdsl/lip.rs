//! Sampled relative Lipschitz moduli and relative lower semicontinuity.

use serde::Serialize;
use thiserror::Error;

use super::piecewise::{grid_points, PiecewiseFunc};
use crate::extreal::ExtReal;
use crate::sets::{dist, ClosedSet};
use crate::verdict::Trit;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LipError {
    #[error("reference point {0:?} is not in the set")]
    NotInSet(Vec<f64>),
    #[error("function value at the reference point is {0}")]
    NotFinite(ExtReal),
}

/// `r_j = 2^{-j}`, `j = 0..=16`.
pub fn default_radii() -> Vec<f64> {
    (0..=16).map(|j| 2f64.powi(-j)).collect()
}

pub const DEFAULT_DENSITY: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipEstimate {
    pub value: ExtReal,
    pub radius_schedule: Vec<f64>,
    /// Largest sampled difference quotient at each radius.
    pub per_radius: Vec<ExtReal>,
    pub confident: bool,
}

impl LipEstimate {
    /// The modulus when it is finite and the estimate is trusted.
    pub fn modulus(&self) -> Option<f64> {
        if self.confident {
            self.value.finite()
        } else {
            None
        }
    }
}

/// Deterministic sample of `Ω ∩ B(x̄, r)`, always containing `x̄`.
///
/// On the line: a uniform grid filtered to `Ω`, plus the endpoints of `Ω`'s components
/// inside the window. In higher dimension: a box grid projected onto `Ω` and clipped to
/// the ball (24 points per axis in ℝ³ to keep projections affordable).
pub fn sample_set_ball(omega: &ClosedSet, xbar: &[f64], r: f64, density: usize) -> Vec<Vec<f64>> {
    let n = xbar.len();
    let mut pts = vec![xbar.to_vec()];
    if n == 1 {
        let (lo, hi) = (xbar[0] - r, xbar[0] + r);
        for k in 0..density {
            let x = lo + (hi - lo) * k as f64 / (density - 1) as f64;
            if omega.contains(&[x], 0.0) {
                pts.push(vec![x]);
            }
        }
        let section = omega.line_preimage(&[0.0], &[1.0]);
        for p in section.parts() {
            for e in [p.lo_f64(), p.hi_f64()] {
                if e.is_finite() && e >= lo && e <= hi {
                    pts.push(vec![e]);
                }
            }
        }
    } else {
        let per_axis = if n == 2 { density } else { density.min(24) };
        for g in grid_points(n, r, per_axis) {
            let x: Vec<f64> = g.iter().zip(xbar).map(|(a, b)| a + b).collect();
            let y = omega.nearest(&x);
            if dist(&y, xbar) <= r {
                pts.push(y);
            }
        }
    }
    pts.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    pts.dedup_by(|a, b| dist(a, b) <= 1e-15);
    pts
}

fn check_base(f: &PiecewiseFunc, omega: &ClosedSet, xbar: &[f64]) -> Result<f64, LipError> {
    if !omega.contains(xbar, 1e-12) {
        return Err(LipError::NotInSet(xbar.to_vec()));
    }
    let v = f.eval(xbar).map_or(ExtReal::PosInf, |v| v);
    v.finite().ok_or(LipError::NotFinite(v))
}

/// Relative Lipschitz modulus of `f` at `x̄` on `Ω`, estimated from the largest pairwise
/// difference quotient over shrinking balls.
///
/// The value is the minimum over radii when the quotients at the last three radii do not
/// grow by more than a factor 1.25; an infinite value at small radii, or quotients that keep growing, give `+∞` with
/// `confident = false`.
pub fn lip_estimate(f: &PiecewiseFunc, omega: &ClosedSet, xbar: &[f64], radii: &[f64]) -> Result<LipEstimate, LipError> {
    lip_estimate_with(f, omega, xbar, radii, DEFAULT_DENSITY)
}

pub fn lip_estimate_with(
    f: &PiecewiseFunc,
    omega: &ClosedSet,
    xbar: &[f64],
    radii: &[f64],
    density: usize,
) -> Result<LipEstimate, LipError> {
    check_base(f, omega, xbar)?;
    let per_radius: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let pts = sample_set_ball(omega, xbar, r, density);
            let vals: Vec<f64> = pts.iter().map(|p| f.value(p)).collect();
            max_quotient(&pts, &vals)
        })
        .collect();
    let tail = &per_radius[per_radius.len().saturating_sub(3)..];
    let finite_tail = tail.iter().all(|q| q.is_finite());
    // shrinking quotients converge; growth across the tail signals an infinite modulus
    let stable = finite_tail && tail[tail.len() - 1] <= 1.25 * tail[0] + 1e-9;
    let value = if stable {
        ExtReal::from(per_radius.iter().copied().fold(f64::INFINITY, f64::min))
    } else {
        ExtReal::PosInf
    };
    Ok(LipEstimate {
        value,
        radius_schedule: radii.to_vec(),
        per_radius: per_radius.into_iter().map(ExtReal::from).collect(),
        confident: stable,
    })
}

fn max_quotient(pts: &[Vec<f64>], vals: &[f64]) -> f64 {
    // pairs (i, j) with j from a strided subset when the sample is large
    let stride = (pts.len() / 256).max(1);
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in (0..pts.len()).step_by(stride) {
            if i == j {
                continue;
            }
            let (a, b) = (vals[i], vals[j]);
            if !a.is_finite() || !b.is_finite() {
                return f64::INFINITY;
            }
            let d = dist(&pts[i], &pts[j]);
            if d > 0.0 {
                best = best.max((a - b).abs() / d);
            }
        }
    }
    best
}

/// Relative lower semicontinuity at `x̄`: the sampled `liminf` of `f` over `Ω` (median of the
/// last three radii) must be at least `f(x̄) − tol`. Isolated points of `Ω` pass trivially.
pub fn check_lsc_relative(f: &PiecewiseFunc, omega: &ClosedSet, xbar: &[f64], tol: f64) -> Result<Trit, LipError> {
    lsc_at(f, omega, xbar, tol, &default_radii(), DEFAULT_DENSITY)
}

fn lsc_at(f: &PiecewiseFunc, omega: &ClosedSet, xbar: &[f64], tol: f64, radii: &[f64], density: usize) -> Result<Trit, LipError> {
    let fbar = check_base(f, omega, xbar)?;
    let mins: Vec<f64> = radii
        .iter()
        .filter_map(|&r| {
            sample_set_ball(omega, xbar, r, density)
                .iter()
                .filter(|p| dist(p, xbar) > 0.0)
                .map(|p| f.value(p))
                .reduce(f64::min)
        })
        .collect();
    if mins.is_empty() {
        return Ok(Trit::from_margin(f64::INFINITY, tol));
    }
    // minima over halving radii behave like m0 + c·r; extrapolate to r = 0
    let liminf = match mins[mins.len().saturating_sub(2)..] {
        [prev, last] if prev.is_finite() && last.is_finite() => 2.0 * last - prev,
        [.., last] => last,
        [] => unreachable!(),
    };
    Ok(Trit::from_margin(liminf - fbar, tol))
}

/// Outcome of scanning a neighbourhood for relative lower semicontinuity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LscAround {
    pub at_point: Trit,
    pub around: bool,
    /// First neighbour where the test fails, if any.
    pub witness: Option<Vec<f64>>,
    pub reason: Option<String>,
}

/// Relative lower semicontinuity at every point of `Ω ∩ B(x̄, radius)`.
///
/// Relative lsc is only defined at points of `dom f`, so a neighbour of `Ω` where `f = +∞`
/// fails the scan: the property cannot hold around `x̄` there. On the line the scan includes
/// all breakpoints of `f` in the window.
pub fn lsc_around(f: &PiecewiseFunc, omega: &ClosedSet, xbar: &[f64], radius: f64, tol: f64) -> Result<LscAround, LipError> {
    let at_point = check_lsc_relative(f, omega, xbar, tol)?;
    let n = xbar.len();
    let mut candidates = sample_set_ball(omega, xbar, radius, if n == 1 { 65 } else { 9 });
    if n == 1 {
        for b in f.breakpoints_1d(xbar[0] - radius, xbar[0] + radius) {
            if omega.contains(&[b], 0.0) {
                candidates.push(vec![b]);
            }
        }
    }
    let radii: Vec<f64> = (4..=16).map(|j| radius * 2f64.powi(-j)).collect();
    for u in candidates {
        let v = f.value(&u);
        if v == f64::INFINITY {
            return Ok(LscAround {
                at_point,
                around: false,
                witness: Some(u),
                reason: Some("neighbour outside the domain of f".into()),
            });
        }
        if v == f64::NEG_INFINITY {
            continue;
        }
        let t = lsc_at(f, omega, &u, tol, &radii, if n == 1 { 64 } else { 8 })?;
        if t.is_out() {
            return Ok(LscAround { at_point, around: false, witness: Some(u), reason: Some("liminf below the value".into()) });
        }
    }
    Ok(LscAround { at_point, around: at_point.is_in(), witness: None, reason: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn iv(s: &str) -> ClosedSet {
        ClosedSet::interval_1d(s.parse().unwrap()).unwrap()
    }

    fn f1(pieces: &[(&str, &str)], default: &str) -> PiecewiseFunc {
        PiecewiseFunc::from_source(1, pieces, default, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn lip_examples() {
        let radii = default_radii();
        let neg_abs = PiecewiseFunc::formula(1, "-abs(x)").unwrap();
        let e = lip_estimate(&neg_abs, &iv("(-inf, 0]"), &[0.0], &radii).unwrap();
        assert!(e.confident);
        assert!((e.value.to_f64() - 1.0).abs() < 1e-12);
        let cube = PiecewiseFunc::formula(1, "x^3/3").unwrap();
        let e = lip_estimate(&cube, &iv("[0, 1]"), &[1.0], &radii).unwrap();
        assert!(e.confident && (e.value.to_f64() - 1.0).abs() < 0.05);
        let isolated = f1(&[("x < 0", "-inf"), ("{0}", "0")], "inf");
        let e = lip_estimate(&isolated, &iv("[0, inf)"), &[0.0], &radii).unwrap();
        assert_eq!(e.value, ExtReal::PosInf);
        assert!(!e.confident);
    }

    #[test]
    fn lip_is_scale_covariant() {
        let radii = default_radii();
        for src in ["x^3/3", "-abs(x)", "exp(x) - 1"] {
            let f = PiecewiseFunc::formula(1, src).unwrap();
            let base = lip_estimate(&f, &iv("[-1, 1]"), &[0.5], &radii).unwrap().value.to_f64();
            for lambda in [0.5, 2.0, 10.0] {
                let scaled = lip_estimate(&f.scale(lambda).unwrap(), &iv("[-1, 1]"), &[0.5], &radii).unwrap();
                assert!((scaled.value.to_f64() - lambda * base).abs() <= 0.05 * lambda * base);
            }
        }
    }

    #[test]
    fn lsc_examples() {
        let isolated = f1(&[("x < 0", "-inf"), ("{0}", "0")], "inf");
        assert!(check_lsc_relative(&isolated, &iv("[0, inf)"), &[0.0], 1e-9).unwrap().is_in());
        let bad = f1(&[("x < 0", "inf"), ("{0}", "0")], "-inf");
        let c = iv("[-0.5, 0]");
        let scan = lsc_around(&bad, &c, &[0.0], 0.25, 1e-9).unwrap();
        assert!(scan.at_point.is_in());
        assert!(!scan.around);
        let cube = PiecewiseFunc::formula(1, "x^3/3").unwrap();
        assert!(lsc_around(&cube, &iv("[0, 1]"), &[0.5], 0.25, 1e-9).unwrap().around);
        let jump = f1(&[("x <= 0", "0"), ("x > 0", "1")], "inf");
        assert!(check_lsc_relative(&jump, &iv("[-1, 1]"), &[0.0], 1e-9).unwrap().is_in());
        let upper = f1(&[("x < 0", "0"), ("x >= 0", "1")], "inf");
        assert!(check_lsc_relative(&upper, &iv("[-1, 1]"), &[0.0], 1e-9).unwrap().is_out());
        assert!(!lsc_around(&upper, &iv("[-1, 1]"), &[0.1], 0.25, 1e-9).unwrap().around);
    }
}
