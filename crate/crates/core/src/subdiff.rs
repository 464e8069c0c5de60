//! Exact relative subdifferentials of one-dimensional piecewise functions, and the reduction
//! of segment problems in ℝⁿ to the line.
//!
//! Everything is derived from the one-sided behaviour of `f_Ω` at `x̄`: whether each side is
//! reachable inside `Ω ∩ dom f`, and if so whether `f` continues from `f(x̄)` with a finite
//! one-sided slope or jumps. From these the epigraph's tangent cone at `(x̄, f(x̄))` is known
//! exactly, which gives the ε-normals of the epigraph in closed form.

use serde::Serialize;
use thiserror::Error;

use crate::extreal::ExtReal;
use crate::funcdsl::{Expr, PiecewiseFunc};
use crate::interval::{Interval, IntervalSet};
use crate::sets::{dist, norm, sub, ClosedSet, SetError};

/// Relative tolerance for deciding that a one-sided limit equals `f(x̄)`.
const CONTINUITY_TOL: f64 = 1e-12;
/// Offset used to read the sign of a pole's one-sided limit.
const POLE_PROBE: f64 = 1e-9;
/// Distance a segment query point may lie off its segment.
pub const SEGMENT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubdiffError {
    #[error("point {0:?} is not in the set and the domain of the function")]
    NotInDomain(Vec<f64>),
    #[error("epsilon must be nonnegative, got {0}")]
    NegativeEps(f64),
    #[error("the exact engine works on the line; got dimension {0}")]
    NotOneDimensional(usize),
    #[error("point {0:?} is off the segment by {1}")]
    OffSegment(Vec<f64>, f64),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// How `f_Ω` leaves `x̄` on one side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// No points of `Ω ∩ dom f` on this side near `x̄`.
    Inaccessible,
    /// Continuous from `f(x̄)`; `rate` is the one-sided derivative in the outward direction.
    Continuous { rate: f64 },
    JumpUp,
    JumpDown,
}

impl Side {
    /// `liminf (f(x̄ ± t) − f(x̄)) / t` for the side.
    fn quotient(self) -> ExtReal {
        match self {
            Side::Continuous { rate } => ExtReal::from(rate),
            Side::JumpDown => ExtReal::NegInf,
            Side::JumpUp | Side::Inaccessible => ExtReal::PosInf,
        }
    }

    fn finite_rate(self) -> Option<f64> {
        match self {
            Side::Continuous { rate } if rate.is_finite() => Some(rate),
            _ => None,
        }
    }
}

/// One-sided lower Dini quotients of `f_Ω` at `x̄`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiniData {
    pub d_plus: ExtReal,
    /// `liminf_{t↓0} (f_Ω(x̄ − t) − f_Ω(x̄)) / t`.
    pub d_minus: ExtReal,
    pub right_accessible: bool,
    pub left_accessible: bool,
    pub right: Side,
    pub left: Side,
    /// Tangent cone of `Ω` at `x̄`.
    pub tangent: IntervalSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubdiffKind {
    EpsRegular { eps: f64 },
    LimitingRelative,
    LimitingPlain,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    Estimated { tol: f64 },
}

/// A subdifferential: the scalar set `set` along the unit vector `direction`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdiffSet {
    pub set: IntervalSet,
    pub direction: Vec<f64>,
    pub exactness: Exactness,
    pub kind: SubdiffKind,
}

impl SubdiffSet {
    fn exact_1d(set: IntervalSet, kind: SubdiffKind) -> SubdiffSet {
        SubdiffSet { set, direction: vec![1.0], exactness: Exactness::Exact, kind }
    }
}

/// `Ω` as an interval union.
fn line_set(omega: &ClosedSet) -> Result<IntervalSet, SubdiffError> {
    match omega.dim() {
        1 => Ok(omega.line_preimage(&[0.0], &[1.0])),
        n => Err(SubdiffError::NotOneDimensional(n)),
    }
}

/// Does `s` contain `(x, x + δ)` (right) or `(x − δ, x)` (left) for some `δ > 0`?
fn reaches(s: &IntervalSet, x: f64, right: bool) -> bool {
    let x = ExtReal::from(x);
    s.parts().iter().any(|p| if right { p.lo() <= x && x < p.hi() } else { p.lo() < x && x <= p.hi() })
}

fn side_expr(f: &PiecewiseFunc, x: f64, right: bool) -> Expr {
    f.guard_sets_1d()
        .iter()
        .position(|g| reaches(g, x, right))
        .map_or(Expr::Const(f.default), |i| f.pieces[i].expr.clone())
}

fn classify(f: &PiecewiseFunc, domain: &IntervalSet, x: f64, fbar: f64, right: bool) -> Side {
    if !reaches(domain, x, right) {
        return Side::Inaccessible;
    }
    let e = side_expr(f, x, right);
    if e == Expr::Const(ExtReal::PosInf) {
        return Side::Inaccessible;
    }
    let dir = if right { 1.0 } else { -1.0 };
    let limit = match e.eval(&[x]) {
        Ok(v) => v,
        // a pole at x̄: the side limit is infinite with the sign seen just beside it
        Err(_) => match e.eval(&[x + dir * POLE_PROBE]) {
            Ok(v) if v < 0.0 => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        },
    };
    if (limit - fbar).abs() <= CONTINUITY_TOL * (1.0 + fbar.abs()) {
        let rate = e.dir_deriv(&[x], &[dir]).map_or(f64::NAN, |(_, r)| r);
        if rate.is_nan() {
            return Side::JumpUp;
        }
        Side::Continuous { rate }
    } else if limit > fbar {
        Side::JumpUp
    } else {
        Side::JumpDown
    }
}

/// One-sided Dini quotients of `f_Ω` at `x̄`.
pub fn dini(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64) -> Result<DiniData, SubdiffError> {
    if f.dim != 1 {
        return Err(SubdiffError::NotOneDimensional(f.dim));
    }
    let omega_set = line_set(omega)?;
    let domain = omega_set.intersect(&f.mask_set_1d());
    let fbar = f.restrict(omega).value(&[xbar]);
    if !domain.contains(xbar) || !fbar.is_finite() {
        return Err(SubdiffError::NotInDomain(vec![xbar]));
    }
    let right = classify(f, &domain, xbar, fbar, true);
    let left = classify(f, &domain, xbar, fbar, false);
    let tangent = omega.tangent_cone(&[xbar])?.to_interval().as_interval().cloned().unwrap_or_default();
    Ok(DiniData {
        d_plus: right.quotient(),
        d_minus: left.quotient(),
        right_accessible: right != Side::Inaccessible,
        left_accessible: left != Side::Inaccessible,
        right,
        left,
        tangent,
    })
}

/// `[−d_minus, d_plus]`.
fn frechet(d: &DiniData) -> IntervalSet {
    Interval::new(-d.d_minus.to_f64(), d.d_plus.to_f64(), true, true).map_or_else(IntervalSet::empty, IntervalSet::single)
}

/// Regular subdifferential of `f_Ω` at `x̄`.
pub fn regular_subdiff_fomega(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64) -> Result<SubdiffSet, SubdiffError> {
    let d = dini(f, omega, xbar)?;
    Ok(SubdiffSet::exact_1d(frechet(&d), SubdiffKind::EpsRegular { eps: 0.0 }))
}

/// Polar of one component of the epigraph's tangent cone: a ray or a sector (angle < π).
enum Polar {
    Ray([f64; 2]),
    Sector([f64; 2], [f64; 2]),
}

fn dist_ray(p: [f64; 2], g: [f64; 2]) -> f64 {
    let t = (p[0] * g[0] + p[1] * g[1]) / (g[0] * g[0] + g[1] * g[1]);
    if t <= 0.0 {
        p[0].hypot(p[1])
    } else {
        (p[0] - t * g[0]).hypot(p[1] - t * g[1])
    }
}

impl Polar {
    fn generators(&self) -> Vec<[f64; 2]> {
        match self {
            Polar::Ray(g) => vec![*g],
            Polar::Sector(g, h) => vec![*g, *h],
        }
    }

    fn dist(&self, p: [f64; 2]) -> f64 {
        match self {
            Polar::Ray(g) => dist_ray(p, *g),
            Polar::Sector(g, h) => {
                // p = a·g + b·h with a, b ≥ 0 means p is inside
                let det = g[0] * h[1] - g[1] * h[0];
                let a = (p[0] * h[1] - p[1] * h[0]) / det;
                let b = (g[0] * p[1] - g[1] * p[0]) / det;
                if a >= 0.0 && b >= 0.0 {
                    0.0
                } else {
                    dist_ray(p, *g).min(dist_ray(p, *h))
                }
            }
        }
    }
}

/// Polars of the components of `T((x̄, f(x̄)), epi f_Ω)` other than the vertical ray, whose
/// polar (the lower half-plane) contains every `(s, −1)`.
fn epigraph_polars(d: &DiniData) -> Vec<Polar> {
    let mut out = Vec::new();
    for (side, outward) in [(d.right, 1.0), (d.left, -1.0)] {
        match side {
            // sector between (±1, rate) and the vertical ray
            Side::Continuous { rate } if rate.is_finite() => out.push(Polar::Sector([-outward, 0.0], [outward * rate, -1.0])),
            // a half-plane on that side
            Side::JumpDown => out.push(Polar::Ray([-outward, 0.0])),
            Side::Continuous { rate } if rate == f64::NEG_INFINITY => out.push(Polar::Ray([-outward, 0.0])),
            _ => {}
        }
    }
    out
}

/// `{s : dist((s, −1), Cᵢ°) ≤ ε for every component}`, a closed interval.
fn eps_epigraph_set(polars: &[Polar], eps: f64) -> IntervalSet {
    let feasible = |s: f64| polars.iter().all(|c| c.dist([s, -1.0]) <= eps + 1e-12 * (1.0 + s.abs()));
    // every boundary point solves dist = ε on a ray, or sits where a ray's foot switches
    let mut cands = vec![0.0];
    if eps >= 1.0 {
        let r = (eps * eps - 1.0).sqrt();
        cands.extend([r, -r]);
    }
    for g in polars.iter().flat_map(Polar::generators) {
        let n = g[0].hypot(g[1]);
        if g[1] != 0.0 {
            cands.extend([(eps * n - g[0]) / g[1], (-eps * n - g[0]) / g[1], -g[0] / g[1]]);
        }
    }
    cands.retain(|c| c.is_finite());
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let (first, last) = (cands[0], cands[cands.len() - 1]);
    let (left_probe, right_probe) = (first - 1.0 - first.abs(), last + 1.0 + last.abs());
    let mut probes = cands.clone();
    probes.extend(cands.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let ok: Vec<f64> = probes.into_iter().filter(|s| feasible(*s)).collect();
    let lo = if feasible(left_probe) { f64::NEG_INFINITY } else { ok.iter().copied().fold(f64::INFINITY, f64::min) };
    let hi = if feasible(right_probe) { f64::INFINITY } else { ok.iter().copied().fold(f64::NEG_INFINITY, f64::max) };
    if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
        return IntervalSet::real_line();
    }
    Interval::new(lo, hi, true, true).map_or_else(IntervalSet::empty, IntervalSet::single)
}

/// ε-regular subdifferential of `f` relative to `Ω` at `x̄`.
///
/// For `ε = 0` this is `[−d_minus, d_plus] ∩ T(x̄, Ω)`. For `ε > 0`, `s` is a geometric
/// ε-subgradient iff `sup ⟨(s, −1), w⟩ ≤ ε` over unit `w` in the epigraph's tangent cone; the
/// cone is a union of convex sectors, so the test is `dist((s, −1), Cᵢ°) ≤ ε` for each sector.
pub fn eps_regular_relative(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64, eps: f64) -> Result<SubdiffSet, SubdiffError> {
    if eps.is_nan() || eps < 0.0 {
        return Err(SubdiffError::NegativeEps(eps));
    }
    let d = dini(f, omega, xbar)?;
    let geometric = if eps == 0.0 { frechet(&d) } else { eps_epigraph_set(&epigraph_polars(&d), eps) };
    Ok(SubdiffSet::exact_1d(geometric.intersect(&d.tangent), SubdiffKind::EpsRegular { eps }))
}

/// Limits of subgradients at nearby points where `f` continues from `f(x̄)`: the one-sided
/// derivative of each continuous side (nearby points are interior, where the subgradient is
/// the derivative and ε-inflations vanish).
fn approach_limits(d: &DiniData) -> IntervalSet {
    let mut out = IntervalSet::empty();
    if let Some(r) = d.right.finite_rate() {
        out = out.union(&IntervalSet::point(r));
    }
    if let Some(r) = d.left.finite_rate() {
        out = out.union(&IntervalSet::point(-r));
    }
    out
}

/// Limiting subdifferential relative to `Ω`.
pub fn limiting_relative(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64) -> Result<SubdiffSet, SubdiffError> {
    let d = dini(f, omega, xbar)?;
    let stationary = frechet(&d).intersect(&d.tangent);
    Ok(SubdiffSet::exact_1d(stationary.union(&approach_limits(&d)), SubdiffKind::LimitingRelative))
}

/// Standard limiting subdifferential of `f_Ω` (no tangent filtering).
pub fn limiting_plain(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64) -> Result<SubdiffSet, SubdiffError> {
    let d = dini(f, omega, xbar)?;
    Ok(SubdiffSet::exact_1d(frechet(&d).union(&approach_limits(&d)), SubdiffKind::LimitingPlain))
}

/// Dispatches on `kind`.
pub fn subdiff_1d(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64, kind: SubdiffKind) -> Result<SubdiffSet, SubdiffError> {
    match kind {
        SubdiffKind::EpsRegular { eps } => eps_regular_relative(f, omega, xbar, eps),
        SubdiffKind::LimitingRelative => limiting_relative(f, omega, xbar),
        SubdiffKind::LimitingPlain => limiting_plain(f, omega, xbar),
    }
}

/// A segment `[a, b]` parametrized by arclength.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentFrame {
    pub a: Vec<f64>,
    pub unit: Vec<f64>,
    pub length: f64,
}

impl SegmentFrame {
    pub fn new(a: &[f64], b: &[f64]) -> Result<SegmentFrame, SubdiffError> {
        ClosedSet::segment(a.to_vec(), b.to_vec())?;
        let d = sub(b, a);
        let length = norm(&d);
        Ok(SegmentFrame { a: a.to_vec(), unit: d.iter().map(|v| v / length).collect(), length })
    }

    pub fn point(&self, s: f64) -> Vec<f64> {
        self.a.iter().zip(&self.unit).map(|(p, u)| p + s * u).collect()
    }

    /// Arclength of `x`, which must lie on the segment within [`SEGMENT_TOL`].
    pub fn coordinate(&self, x: &[f64]) -> Result<f64, SubdiffError> {
        let rel = sub(x, &self.a);
        let s = rel.iter().zip(&self.unit).map(|(p, u)| p * u).sum::<f64>().clamp(0.0, self.length);
        let off = dist(x, &self.point(s));
        if off > SEGMENT_TOL {
            return Err(SubdiffError::OffSegment(x.to_vec(), off));
        }
        Ok(s)
    }

    /// `g(s) = f(a + s·u)` and the parameter interval `[0, ‖b − a‖]`.
    pub fn reduce(&self, f: &PiecewiseFunc) -> (PiecewiseFunc, ClosedSet) {
        let g = f.along_line(&self.a, &self.unit);
        let omega = ClosedSet::interval_1d(IntervalSet::closed(0.0, self.length)).expect("nonempty parameter interval");
        (g, omega)
    }
}

/// Subdifferential of `f` relative to the segment `[a, b]` at `x̄`, as scalars along
/// `u = (b − a)/‖b − a‖`. Off the segment `f_{[a,b]}` is `+∞`, so every epigraph direction
/// lies in the plane of `u` and the vertical, and the problem is exactly one-dimensional.
pub fn segment_subdiff(
    f: &PiecewiseFunc,
    a: &[f64],
    b: &[f64],
    xbar: &[f64],
    kind: SubdiffKind,
) -> Result<SubdiffSet, SubdiffError> {
    let frame = SegmentFrame::new(a, b)?;
    let s0 = frame.coordinate(xbar)?;
    let (g, omega) = frame.reduce(f);
    let mut out = subdiff_1d(&g, &omega, s0, kind)?;
    out.direction = frame.unit;
    Ok(out)
}
