//! Finite unions of real intervals in canonical form.
//!
//! Every 1-D object the toolkit returns (subdifferentials, tangent cones, ε-normal slices)
//! is an [`IntervalSet`]. Intervals may be unbounded, half-open or degenerate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::extreal::ExtReal;

/// Default endpoint convergence tolerance for [`outer_limit`].
pub const TOL_LIM: f64 = 1e-7;

#[derive(Debug, Error, PartialEq)]
pub enum IntervalError {
    #[error("affine image with zero scale collapses the set; handle λ = 0 separately")]
    ZeroScale,
    #[error("cannot parse interval set {0:?}: {1}")]
    Parse(String, String),
}

/// A nonempty interval. Infinite endpoints are always open; a degenerate interval is closed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    /// Builds an interval, returning `None` when the description denotes the empty set.
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Option<Interval> {
        if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return None;
        }
        // normalise -0 so that displays and comparisons of endpoints are canonical
        let (lo, hi) = (lo + 0.0, hi + 0.0);
        let lo_closed = lo_closed && lo.is_finite();
        let hi_closed = hi_closed && hi.is_finite();
        match lo.partial_cmp(&hi) {
            Some(Ordering::Less) => Some(Interval { lo, hi, lo_closed, hi_closed }),
            Some(Ordering::Equal) if lo_closed && hi_closed => {
                Some(Interval { lo, hi, lo_closed, hi_closed })
            }
            _ => None,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi, true, true).expect("closed interval with lo <= hi")
    }

    pub fn point(x: f64) -> Interval {
        Interval::closed(x, x)
    }

    pub fn real_line() -> Interval {
        Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY, lo_closed: false, hi_closed: false }
    }

    pub fn lo(&self) -> ExtReal {
        ExtReal::from(self.lo)
    }
    pub fn hi(&self) -> ExtReal {
        ExtReal::from(self.hi)
    }
    pub fn lo_f64(&self) -> f64 {
        self.lo
    }
    pub fn hi_f64(&self) -> f64 {
        self.hi
    }
    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }
    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.partial_cmp(&other.lo).unwrap() {
            Ordering::Less => (other.lo, other.lo_closed),
            Ordering::Greater => (self.lo, self.lo_closed),
            Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.partial_cmp(&other.hi).unwrap() {
            Ordering::Less => (self.hi, self.hi_closed),
            Ordering::Greater => (other.hi, other.hi_closed),
            Ordering::Equal => (self.hi, self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    fn closure(&self) -> Interval {
        Interval { lo_closed: self.lo.is_finite(), hi_closed: self.hi.is_finite(), ..*self }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            return write!(f, "{{{}}}", ExtReal::from(self.lo));
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            ExtReal::from(self.lo),
            ExtReal::from(self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Sorted, pairwise disjoint, non-adjacent intervals. The empty list is `∅`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

fn lo_key(a: &Interval, b: &Interval) -> Ordering {
    a.lo.partial_cmp(&b.lo).unwrap().then_with(|| b.lo_closed.cmp(&a.lo_closed))
}

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet { parts: Vec::new() }
    }

    pub fn real_line() -> IntervalSet {
        IntervalSet { parts: vec![Interval::real_line()] }
    }

    pub fn single(iv: Interval) -> IntervalSet {
        IntervalSet { parts: vec![iv] }
    }

    pub fn point(x: f64) -> IntervalSet {
        IntervalSet::single(Interval::point(x))
    }

    pub fn closed(lo: f64, hi: f64) -> IntervalSet {
        IntervalSet::single(Interval::closed(lo, hi))
    }

    /// `[lo, ∞)`.
    pub fn at_least(lo: f64) -> IntervalSet {
        IntervalSet::single(Interval::new(lo, f64::INFINITY, true, false).unwrap())
    }

    /// `(−∞, hi]`.
    pub fn at_most(hi: f64) -> IntervalSet {
        IntervalSet::single(Interval::new(f64::NEG_INFINITY, hi, false, true).unwrap())
    }

    /// Canonical form of an arbitrary list of intervals.
    pub fn from_parts(mut parts: Vec<Interval>) -> IntervalSet {
        parts.sort_by(lo_key);
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for iv in parts {
            if let Some(last) = out.last_mut() {
                let touches = iv.lo < last.hi || (iv.lo == last.hi && (last.hi_closed || iv.lo_closed));
                if touches {
                    match iv.hi.partial_cmp(&last.hi).unwrap() {
                        Ordering::Greater => {
                            last.hi = iv.hi;
                            last.hi_closed = iv.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= iv.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        IntervalSet { parts: out }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        IntervalSet::from_parts(parts)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a, b) = (&self.parts[i], &other.parts[j]);
            if let Some(c) = a.intersect(b) {
                out.push(c);
            }
            // advance whichever ends first
            let a_first = a.hi < b.hi || (a.hi == b.hi && !a.hi_closed);
            if a_first {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet::from_parts(out)
    }

    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut lo = f64::NEG_INFINITY;
        let mut lo_closed = false;
        for p in &self.parts {
            if let Some(iv) = Interval::new(lo, p.lo, lo_closed, !p.lo_closed) {
                out.push(iv);
            }
            lo = p.hi;
            lo_closed = !p.hi_closed;
        }
        if let Some(iv) = Interval::new(lo, f64::INFINITY, lo_closed, false) {
            out.push(iv);
        }
        IntervalSet::from_parts(out)
    }

    pub fn closure(&self) -> IntervalSet {
        IntervalSet::from_parts(self.parts.iter().map(Interval::closure).collect())
    }

    /// Image `{λa + c : a ∈ A}`.
    pub fn affine(&self, lambda: f64, c: f64) -> Result<IntervalSet, IntervalError> {
        if lambda == 0.0 {
            return Err(IntervalError::ZeroScale);
        }
        let parts = self
            .parts
            .iter()
            .map(|p| {
                let (a, b) = (lambda * p.lo + c, lambda * p.hi + c);
                if lambda > 0.0 {
                    Interval::new(a, b, p.lo_closed, p.hi_closed)
                } else {
                    Interval::new(b, a, p.hi_closed, p.lo_closed)
                }
                .expect("affine image of a nonempty interval is nonempty")
            })
            .collect();
        Ok(IntervalSet::from_parts(parts))
    }

    /// `{a + b : a ∈ A, b ∈ B}` by pairwise interval sums.
    pub fn minkowski_sum(&self, other: &IntervalSet) -> IntervalSet {
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let lo = a.lo + b.lo;
                let hi = a.hi + b.hi;
                if let Some(iv) = Interval::new(lo, hi, a.lo_closed && b.lo_closed, a.hi_closed && b.hi_closed) {
                    parts.push(iv);
                }
            }
        }
        IntervalSet::from_parts(parts)
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.intersect(other) == *self
    }

    /// Inclusion up to widening `other` by `tol` on every side.
    pub fn is_subset_tol(&self, other: &IntervalSet, tol: f64) -> bool {
        self.is_subset(&other.widen(tol))
    }

    /// Closed `tol`-neighbourhood of the set.
    pub fn widen(&self, tol: f64) -> IntervalSet {
        IntervalSet::from_parts(
            self.parts
                .iter()
                .map(|p| Interval::new(p.lo - tol, p.hi + tol, true, true).unwrap())
                .collect(),
        )
    }

    pub fn approx_eq(&self, other: &IntervalSet, tol: f64) -> bool {
        self.is_subset_tol(other, tol) && other.is_subset_tol(self, tol)
    }

    pub fn inf(&self) -> Option<ExtReal> {
        self.parts.first().map(|p| p.lo())
    }

    pub fn sup(&self) -> Option<ExtReal> {
        self.parts.last().map(|p| p.hi())
    }

    pub fn left_unbounded(&self) -> bool {
        self.parts.first().is_some_and(|p| p.lo == f64::NEG_INFINITY)
    }

    pub fn right_unbounded(&self) -> bool {
        self.parts.last().is_some_and(|p| p.hi == f64::INFINITY)
    }

    /// Distance from `x` to the closure of the set; `+∞` for the empty set.
    pub fn dist(&self, x: f64) -> f64 {
        self.parts
            .iter()
            .map(|p| {
                if x < p.lo {
                    p.lo - x
                } else if x > p.hi {
                    x - p.hi
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Element of the closure nearest to `x` (ties go to the smaller element).
    pub fn nearest(&self, x: f64) -> Option<f64> {
        let mut best: Option<(f64, f64)> = None;
        for p in &self.parts {
            let y = x.clamp(p.lo, p.hi);
            let d = (y - x).abs();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, y));
            }
        }
        best.map(|(_, y)| y)
    }

    /// Hausdorff distance between the closures of both sets clipped to `[-cap, cap]`.
    /// Two empty sets are at distance 0; an empty and a nonempty set at `+∞`.
    pub fn hausdorff_bounded(&self, other: &IntervalSet, cap: f64) -> f64 {
        let window = IntervalSet::closed(-cap, cap);
        let a = self.closure().intersect(&window);
        let b = other.closure().intersect(&window);
        match (a.is_empty(), b.is_empty()) {
            (true, true) => 0.0,
            (true, false) | (false, true) => f64::INFINITY,
            _ => one_sided_excess(&a, &b).max(one_sided_excess(&b, &a)),
        }
    }
}

// sup_{x ∈ a} dist(x, b) for compact nonempty sets
fn one_sided_excess(a: &IntervalSet, b: &IntervalSet) -> f64 {
    let mut candidates: Vec<f64> = a.parts.iter().flat_map(|p| [p.lo, p.hi]).collect();
    for w in b.parts.windows(2) {
        let mid = 0.5 * (w[0].hi + w[1].lo);
        if a.contains(mid) {
            candidates.push(mid);
        }
    }
    candidates.into_iter().map(|x| b.dist(x)).fold(0.0, f64::max)
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "empty");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses the display syntax: `empty`, `{1}`, `[0, inf)`, `(-inf, 0] u [1, 2)`.
impl FromStr for IntervalSet {
    type Err = IntervalError;
    fn from_str(s: &str) -> Result<IntervalSet, IntervalError> {
        let err = |m: &str| IntervalError::Parse(s.to_string(), m.to_string());
        let t = s.trim();
        if t.is_empty() || t == "empty" || t == "∅" {
            return Ok(IntervalSet::empty());
        }
        let mut parts = Vec::new();
        for raw in t.split(['u', '∪']) {
            let piece = raw.trim();
            if piece.is_empty() {
                return Err(err("empty union term"));
            }
            let iv = parse_interval(piece).map_err(|m| err(&m))?;
            parts.extend(iv);
        }
        Ok(IntervalSet::from_parts(parts))
    }
}

/// Parses one interval literal; `Ok(None)` when it denotes `∅` (e.g. `(1, 1)`).
pub fn parse_interval(piece: &str) -> Result<Option<Interval>, String> {
    let piece = piece.trim();
    if piece.starts_with('{') && piece.ends_with('}') {
        let x: ExtReal = piece[1..piece.len() - 1].parse()?;
        let x = x.finite().ok_or("singleton must be finite")?;
        return Ok(Some(Interval::point(x)));
    }
    let open = piece.chars().next().ok_or("empty interval literal")?;
    let close = piece.chars().last().unwrap();
    let lo_closed = match open {
        '[' => true,
        '(' => false,
        _ => return Err(format!("interval must start with '[' or '(': {piece:?}")),
    };
    let hi_closed = match close {
        ']' => true,
        ')' => false,
        _ => return Err(format!("interval must end with ']' or ')': {piece:?}")),
    };
    let inner = &piece[1..piece.len() - 1];
    let (a, b) = inner.split_once(',').ok_or("interval needs two endpoints")?;
    let lo: ExtReal = a.parse()?;
    let hi: ExtReal = b.parse()?;
    if lo > hi {
        return Err(format!("lower endpoint exceeds upper endpoint in {piece:?}"));
    }
    Ok(Interval::new(lo.to_f64(), hi.to_f64(), lo_closed, hi_closed))
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<IntervalSet, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Result of a numerical Painlevé–Kuratowski outer limit.
#[derive(Clone, Debug, PartialEq)]
pub enum OuterLimit {
    Converged(IntervalSet),
    /// Endpoint sequences did not settle; the raw `(scale, set)` data is returned.
    Inconclusive { reason: String, raw: Vec<(f64, IntervalSet)> },
}

impl OuterLimit {
    pub fn converged(self) -> Option<IntervalSet> {
        match self {
            OuterLimit::Converged(s) => Some(s),
            OuterLimit::Inconclusive { .. } => None,
        }
    }
}

/// Outer limit of a sequence `(k, A_k)` with strictly increasing indices, modelling each
/// endpoint as `e_k ≈ L + c/k`.
pub fn outer_limit(seq: &[(usize, IntervalSet)]) -> OuterLimit {
    let scaled: Vec<(f64, IntervalSet)> =
        seq.iter().map(|(k, s)| (1.0 / (*k as f64), s.clone())).collect();
    outer_limit_scaled(&scaled, TOL_LIM)
}

/// Outer limit of a sequence indexed by scales `h_k ↓ 0`.
///
/// Endpoints are extrapolated with the linear model `e ≈ L + c·h` fitted on the last two
/// terms; the third-to-last term must agree with the model within `tol`. Infinite endpoints
/// must be infinite along the whole tail. The limit is closed.
pub fn outer_limit_scaled(seq: &[(f64, IntervalSet)], tol: f64) -> OuterLimit {
    let inconclusive = |reason: &str| OuterLimit::Inconclusive {
        reason: reason.to_string(),
        raw: seq.to_vec(),
    };
    if seq.is_empty() {
        return inconclusive("empty sequence");
    }
    if seq.windows(2).any(|w| w[1].0 >= w[0].0) || seq.iter().any(|(h, _)| !(*h > 0.0)) {
        return inconclusive("scales must be positive and strictly decreasing");
    }
    let tail = &seq[seq.len().saturating_sub(3)..];
    let empties = tail.iter().filter(|(_, s)| s.is_empty()).count();
    if empties == tail.len() {
        return OuterLimit::Converged(IntervalSet::empty());
    }
    if empties > 0 {
        return inconclusive("tail alternates between empty and nonempty sets");
    }
    let nparts = tail[0].1.parts.len();
    if tail.iter().any(|(_, s)| s.parts.len() != nparts) {
        return inconclusive("number of components does not settle");
    }
    let mut parts = Vec::with_capacity(nparts);
    for i in 0..nparts {
        let los: Vec<(f64, f64)> = tail.iter().map(|(h, s)| (*h, s.parts[i].lo)).collect();
        let his: Vec<(f64, f64)> = tail.iter().map(|(h, s)| (*h, s.parts[i].hi)).collect();
        let lo = match extrapolate(&los, tol) {
            Some(v) => v,
            None => return inconclusive("lower endpoint sequence does not converge"),
        };
        let hi = match extrapolate(&his, tol) {
            Some(v) => v,
            None => return inconclusive("upper endpoint sequence does not converge"),
        };
        if lo > hi {
            return inconclusive("extrapolated endpoints cross");
        }
        parts.push(Interval::new(lo, hi, true, true).unwrap());
    }
    OuterLimit::Converged(IntervalSet::from_parts(parts))
}

fn extrapolate(pts: &[(f64, f64)], tol: f64) -> Option<f64> {
    let first = pts[0].1;
    if first.is_infinite() {
        return pts.iter().all(|(_, e)| *e == first).then_some(first);
    }
    if pts.iter().any(|(_, e)| e.is_infinite()) {
        return None;
    }
    let n = pts.len();
    if n == 1 {
        return Some(first);
    }
    let (h1, e1) = pts[n - 2];
    let (h2, e2) = pts[n - 1];
    let slope = (e1 - e2) / (h1 - h2);
    let limit = e2 - slope * h2;
    if n >= 3 {
        let (h0, e0) = pts[n - 3];
        let predicted = limit + slope * h0;
        if (predicted - e0).abs() > tol * (1.0 + limit.abs()) {
            return None;
        }
    }
    Some(snap(limit))
}

// Removes extrapolation round-off: values within a few ulps of a 12-digit decimal are rounded to it.
fn snap(v: f64) -> f64 {
    if v.abs() < 1e-14 {
        return 0.0;
    }
    let scale = 10f64.powi(11 - v.abs().log10().floor() as i32);
    let r = (v * scale).round() / scale;
    if (r - v).abs() <= 1e-13 * v.abs() {
        r
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    #[test]
    fn union_examples() {
        assert_eq!(set("[0, 1]").union(&set("[1, 2]")), set("[0, 2]"));
        assert_eq!(IntervalSet::empty().union(&set("[-1, 0]")), set("[-1, 0]"));
        assert_eq!(set("[0, 1)").union(&set("{1}")), set("[0, 1]"));
        assert_eq!(set("[0, 1)").union(&set("(1, 2]")).parts().len(), 2);
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(set("[-1, inf)").intersect(&set("(-inf, 0]")), set("[-1, 0]"));
        assert!(set("[1, inf)").intersect(&set("(-inf, 0]")).is_empty());
        let a = set("[0, 1) u {3} u (4, inf)");
        assert_eq!(a.intersect(&a), a);
    }

    #[test]
    fn affine_examples() {
        assert_eq!(set("[0, inf)").affine(2.0, 0.0).unwrap(), set("[0, inf)"));
        assert_eq!(set("[-1, 0]").affine(-1.0, 0.0).unwrap(), set("[0, 1]"));
        assert_eq!(set("[1, 2]").affine(3.0, 1.0).unwrap(), set("[4, 7]"));
        assert_eq!(set("[0, 1)").affine(-1.0, 0.0).unwrap(), set("(-1, 0]"));
        assert_eq!(set("[0, 1]").affine(0.0, 1.0), Err(IntervalError::ZeroScale));
    }

    #[test]
    fn minkowski_and_complement() {
        assert_eq!(set("[-1, 0]").minkowski_sum(&set("{1}")), set("[0, 1]"));
        assert_eq!(set("{1}").minkowski_sum(&set("{1}")), set("{2}"));
        assert_eq!(set("[0, inf)").minkowski_sum(&set("(-inf, 0]")), IntervalSet::real_line());
        assert!(set("[0, 1]").minkowski_sum(&IntervalSet::empty()).is_empty());
        assert_eq!(set("[0, 1)").complement(), set("(-inf, 0) u [1, inf)"));
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::real_line());
    }

    #[test]
    fn display_round_trip() {
        for s in ["empty", "{1}", "[0, inf)", "(-inf, 0] u {2.5} u (3, 4)"] {
            assert_eq!(set(s).to_string(), s);
        }
    }

    #[test]
    fn hausdorff() {
        assert_eq!(set("[0, 1]").hausdorff_bounded(&set("[0, 1.5]"), 10.0), 0.5);
        assert_eq!(set("[0, 1] u [3, 4]").hausdorff_bounded(&set("[0, 4]"), 10.0), 1.0);
        assert_eq!(set("[0, inf)").hausdorff_bounded(&set("[0, 10]"), 10.0), 0.0);
        assert_eq!(IntervalSet::empty().hausdorff_bounded(&set("{0}"), 10.0), f64::INFINITY);
    }

    #[test]
    fn outer_limit_examples() {
        let singletons: Vec<_> = (1..=8).map(|k| (k, IntervalSet::point(1.0 - 1.0 / k as f64))).collect();
        assert_eq!(outer_limit(&singletons), OuterLimit::Converged(set("{1}")));
        let constant: Vec<_> = (1..=8).map(|k| (k, set("[0, inf)"))).collect();
        assert_eq!(outer_limit(&constant), OuterLimit::Converged(set("[0, inf)")));
        // oracle: endpoints -1/k -> 0 and 1 + 1/k -> 1
        let shrinking: Vec<_> = (1..=8)
            .map(|k| (k, IntervalSet::closed(-1.0 / k as f64, 1.0 + 1.0 / k as f64)))
            .collect();
        assert_eq!(outer_limit(&shrinking), OuterLimit::Converged(set("[0, 1]")));
    }

    #[test]
    fn outer_limit_oscillation_is_inconclusive() {
        let osc: Vec<_> = (1..=8)
            .map(|k| (k, IntervalSet::point(if k % 2 == 0 { 1.0 } else { -1.0 })))
            .collect();
        assert!(matches!(outer_limit(&osc), OuterLimit::Inconclusive { .. }));
        let vanishing: Vec<_> = (1..=5)
            .map(|k| (k, if k > 2 { IntervalSet::empty() } else { set("[0, 1]") }))
            .collect();
        assert_eq!(outer_limit(&vanishing), OuterLimit::Converged(IntervalSet::empty()));
    }

    fn arb_interval() -> impl Strategy<Value = Option<Interval>> {
        (
            prop_oneof![Just(f64::NEG_INFINITY), (-20i32..20).prop_map(|v| v as f64 / 4.0)],
            prop_oneof![Just(f64::INFINITY), (-20i32..20).prop_map(|v| v as f64 / 4.0)],
            any::<bool>(),
            any::<bool>(),
        )
            .prop_map(|(a, b, c1, c2)| Interval::new(a.min(b), a.max(b), c1, c2))
    }

    fn arb_list() -> impl Strategy<Value = Vec<Interval>> {
        prop::collection::vec(arb_interval(), 0..6).prop_map(|v| v.into_iter().flatten().collect())
    }

    proptest! {
        #[test]
        fn canonical_form_is_idempotent(parts in arb_list()) {
            let a = IntervalSet::from_parts(parts);
            prop_assert_eq!(IntervalSet::from_parts(a.parts().to_vec()), a.clone());
            for w in a.parts().windows(2) {
                prop_assert!(w[0].hi_f64() < w[1].lo_f64()
                    || (w[0].hi_f64() == w[1].lo_f64() && !w[0].hi_closed() && !w[1].lo_closed()));
            }
        }

        #[test]
        fn membership_coherence(pa in arb_list(), pb in arb_list(), x in (-24i32..24).prop_map(|v| v as f64 / 4.0)) {
            let a = IntervalSet::from_parts(pa.clone());
            let b = IntervalSet::from_parts(pb);
            let raw = pa.iter().any(|p| p.contains(x));
            prop_assert_eq!(a.contains(x), raw);
            prop_assert_eq!(a.union(&b).contains(x), a.contains(x) || b.contains(x));
            prop_assert_eq!(a.intersect(&b).contains(x), a.contains(x) && b.contains(x));
            prop_assert_eq!(a.complement().contains(x), !a.contains(x));
        }

        #[test]
        fn affine_inverts(pa in arb_list(), k in prop_oneof![Just(2.0), Just(-4.0), Just(0.5), Just(-0.25)]) {
            let a = IntervalSet::from_parts(pa);
            let back = a.affine(k, 0.0).unwrap().affine(1.0 / k, 0.0).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
