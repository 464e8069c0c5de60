//! Closed sets in ℝⁿ (n ≤ 3): membership, projection, tangent cones and ε-normals.
//!
//! The duality mapping of a Euclidean space is the identity, so tangent cones and
//! (ε-)normal sets live in the same coordinates as the points themselves.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::interval::{Interval, IntervalSet};
use crate::verdict::{Trit, Verdict};

pub const MAX_DIM: usize = 3;

/// Tolerance used to decide that a point lies on a set or on a facet.
pub const ON_SET_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SetError {
    #[error("dimension {0} is outside 1..=3")]
    BadDim(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("box lower corner exceeds upper corner")]
    InvertedBox,
    #[error("set is empty")]
    Empty,
    #[error("operation requires a convex set")]
    NotConvex,
    #[error("point {0:?} is not in the set")]
    NotInSet(Vec<f64>),
    #[error("ε must be nonnegative, got {0}")]
    NegativeEps(f64),
    #[error("non-finite coordinate")]
    NonFinite,
}

/// Half-space `normal · x ≤ offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vec<f64>, offset: f64) -> HalfSpace {
        HalfSpace { normal, offset }
    }

    fn value(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    fn slack_tol(&self, x: &[f64]) -> f64 {
        ON_SET_TOL * (1.0 + self.offset.abs() + norm(&self.normal) * norm(x))
    }
}

/// A nonempty closed subset of ℝⁿ.
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedSet {
    /// Finite union of closed intervals of the line.
    Interval1D(IntervalSet),
    Segment { a: Vec<f64>, b: Vec<f64> },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Intersection of half-spaces; `bounded` records whether the caller asserts boundedness.
    PolytopeH { dim: usize, rows: Vec<HalfSpace>, bounded: bool },
    FiniteUnion { dim: usize, members: Vec<ClosedSet> },
}

/// A closed cone: an interval cone on the line, a homogeneous polyhedral cone
/// `{v : r·v ≤ 0 for every row r}`, or a finite union of these.
#[derive(Clone, Debug, PartialEq)]
pub enum ConeRep {
    Interval(IntervalSet),
    Polyhedral { dim: usize, rows: Vec<Vec<f64>> },
    Union(Vec<ConeRep>),
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn axpy(x: &[f64], t: f64, v: &[f64]) -> Vec<f64> {
    x.iter().zip(v).map(|(a, b)| a + t * b).collect()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

fn check_dim(dim: usize) -> Result<(), SetError> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(SetError::BadDim(dim))
    }
}

fn check_finite(v: &[f64]) -> Result<(), SetError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(SetError::NonFinite)
    }
}

impl ClosedSet {
    /// A union of intervals of the line; open endpoints are closed up.
    pub fn interval_1d(set: IntervalSet) -> Result<ClosedSet, SetError> {
        if set.is_empty() {
            return Err(SetError::Empty);
        }
        Ok(ClosedSet::Interval1D(set.closure()))
    }

    pub fn segment(a: Vec<f64>, b: Vec<f64>) -> Result<ClosedSet, SetError> {
        check_dim(a.len())?;
        if a.len() != b.len() {
            return Err(SetError::DimMismatch { expected: a.len(), got: b.len() });
        }
        check_finite(&a)?;
        check_finite(&b)?;
        if a == b {
            return Err(SetError::DegenerateSegment);
        }
        Ok(ClosedSet::Segment { a, b })
    }

    /// Axis-aligned box. Infinite bounds are allowed (e.g. a half-space aligned with an axis).
    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<ClosedSet, SetError> {
        check_dim(lo.len())?;
        if lo.len() != hi.len() {
            return Err(SetError::DimMismatch { expected: lo.len(), got: hi.len() });
        }
        if lo.iter().chain(&hi).any(|v| v.is_nan())
            || lo.iter().any(|&v| v == f64::INFINITY)
            || hi.iter().any(|&v| v == f64::NEG_INFINITY)
        {
            return Err(SetError::NonFinite);
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(SetError::InvertedBox);
        }
        Ok(ClosedSet::Box { lo, hi })
    }

    /// H-polytope; rejected when the half-spaces have empty intersection.
    pub fn polytope(dim: usize, rows: Vec<HalfSpace>, bounded: bool) -> Result<ClosedSet, SetError> {
        check_dim(dim)?;
        for r in &rows {
            if r.normal.len() != dim {
                return Err(SetError::DimMismatch { expected: dim, got: r.normal.len() });
            }
            check_finite(&r.normal)?;
            if r.offset.is_nan() || r.offset == f64::NEG_INFINITY {
                return Err(SetError::NonFinite);
            }
        }
        if project_polyhedron(&rows, &vec![0.0; dim]).is_none() {
            return Err(SetError::Empty);
        }
        Ok(ClosedSet::PolytopeH { dim, rows, bounded })
    }

    pub fn union(members: Vec<ClosedSet>) -> Result<ClosedSet, SetError> {
        let dim = members.first().ok_or(SetError::Empty)?.dim();
        for m in &members {
            if m.dim() != dim {
                return Err(SetError::DimMismatch { expected: dim, got: m.dim() });
            }
            if matches!(m, ClosedSet::FiniteUnion { .. }) {
                // flatten nested unions
                let flat: Vec<ClosedSet> = members
                    .into_iter()
                    .flat_map(|m| match m {
                        ClosedSet::FiniteUnion { members, .. } => members,
                        other => vec![other],
                    })
                    .collect();
                return Ok(ClosedSet::FiniteUnion { dim, members: flat });
            }
        }
        Ok(ClosedSet::FiniteUnion { dim, members })
    }

    /// The whole space ℝⁿ.
    pub fn whole(dim: usize) -> Result<ClosedSet, SetError> {
        if dim == 1 {
            return Ok(ClosedSet::Interval1D(IntervalSet::real_line()));
        }
        ClosedSet::boxed(vec![f64::NEG_INFINITY; dim], vec![f64::INFINITY; dim])
    }

    pub fn dim(&self) -> usize {
        match self {
            ClosedSet::Interval1D(_) => 1,
            ClosedSet::Segment { a, .. } => a.len(),
            ClosedSet::Box { lo, .. } => lo.len(),
            ClosedSet::PolytopeH { dim, .. } | ClosedSet::FiniteUnion { dim, .. } => *dim,
        }
    }

    pub fn is_convex_variant(&self) -> bool {
        match self {
            ClosedSet::Interval1D(s) => s.parts().len() == 1,
            ClosedSet::FiniteUnion { .. } => false,
            _ => true,
        }
    }

    /// Euclidean distance from `x` to the set.
    pub fn dist(&self, x: &[f64]) -> f64 {
        match self {
            ClosedSet::Interval1D(s) => s.dist(x[0]),
            ClosedSet::FiniteUnion { members, .. } => {
                members.iter().map(|m| m.dist(x)).fold(f64::INFINITY, f64::min)
            }
            _ => dist(x, &self.nearest(x)),
        }
    }

    /// `dist(x, S) ≤ tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            ClosedSet::Interval1D(s) => s.dist(x[0]) <= tol,
            ClosedSet::Box { lo, hi } => {
                x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *v >= l - tol && *v <= h + tol)
            }
            ClosedSet::FiniteUnion { members, .. } => members.iter().any(|m| m.contains(x, tol)),
            _ => self.dist(x) <= tol,
        }
    }

    /// Nearest point of the set (for unions and multi-part intervals, the nearest over members,
    /// ties to the first member).
    pub fn nearest(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ClosedSet::Interval1D(s) => vec![s.nearest(x[0]).expect("nonempty set")],
            ClosedSet::Segment { a, b } => {
                let d = sub(b, a);
                let t = (dot(&sub(x, a), &d) / dot(&d, &d)).clamp(0.0, 1.0);
                axpy(a, t, &d)
            }
            ClosedSet::Box { lo, hi } => {
                x.iter().zip(lo.iter().zip(hi)).map(|(v, (l, h))| v.clamp(*l, *h)).collect()
            }
            ClosedSet::PolytopeH { rows, .. } => {
                project_polyhedron(rows, x).expect("nonempty polytope has a projection")
            }
            ClosedSet::FiniteUnion { members, .. } => {
                let mut best: Option<(f64, Vec<f64>)> = None;
                for m in members {
                    let p = m.nearest(x);
                    let d = dist(&p, x);
                    if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                        best = Some((d, p));
                    }
                }
                best.expect("union has members").1
            }
        }
    }

    /// Euclidean projection onto a convex set.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>, SetError> {
        if x.len() != self.dim() {
            return Err(SetError::DimMismatch { expected: self.dim(), got: x.len() });
        }
        if !self.is_convex_variant() {
            return Err(SetError::NotConvex);
        }
        Ok(self.nearest(x))
    }

    /// Tangent (contingent) cone at `x̄`.
    pub fn tangent_cone(&self, xbar: &[f64]) -> Result<ConeRep, SetError> {
        if xbar.len() != self.dim() {
            return Err(SetError::DimMismatch { expected: self.dim(), got: xbar.len() });
        }
        if !self.contains(xbar, ON_SET_TOL) {
            return Err(SetError::NotInSet(xbar.to_vec()));
        }
        let raw = match self {
            ClosedSet::Interval1D(s) => return Ok(ConeRep::Interval(interval_tangent(s, xbar[0]))),
            ClosedSet::Segment { a, b } => {
                let d = sub(b, a);
                let t = dot(&sub(xbar, a), &d) / dot(&d, &d);
                let mut rows = orthogonal_complement(&d)
                    .into_iter()
                    .flat_map(|w| [w.clone(), w.iter().map(|v| -v).collect()])
                    .collect::<Vec<_>>();
                let scale = norm(&d);
                if t * scale <= ON_SET_TOL {
                    rows.push(d.iter().map(|v| -v).collect());
                }
                if (1.0 - t) * scale <= ON_SET_TOL {
                    rows.push(d.clone());
                }
                ConeRep::Polyhedral { dim: self.dim(), rows }
            }
            ClosedSet::Box { lo, hi } => {
                let n = self.dim();
                let mut rows = Vec::new();
                for i in 0..n {
                    let tol = ON_SET_TOL * (1.0 + xbar[i].abs());
                    if (xbar[i] - lo[i]).abs() <= tol {
                        rows.push(unit(n, i, -1.0));
                    }
                    if (xbar[i] - hi[i]).abs() <= tol {
                        rows.push(unit(n, i, 1.0));
                    }
                }
                ConeRep::Polyhedral { dim: n, rows }
            }
            ClosedSet::PolytopeH { dim, rows, .. } => ConeRep::Polyhedral {
                dim: *dim,
                rows: rows
                    .iter()
                    .filter(|r| r.value(xbar).abs() <= r.slack_tol(xbar))
                    .map(|r| r.normal.clone())
                    .collect(),
            },
            ClosedSet::FiniteUnion { members, .. } => {
                let cones = members
                    .iter()
                    .filter(|m| m.contains(xbar, ON_SET_TOL))
                    .map(|m| m.tangent_cone(xbar))
                    .collect::<Result<Vec<_>, _>>()?;
                ConeRep::Union(cones)
            }
        };
        Ok(if self.dim() == 1 { raw.to_interval() } else { raw })
    }

    /// Membership of `x*` in the ε-normal set at `x̄`.
    ///
    /// For a convex set the ε-normals are exactly `N(x̄) + εB`, and by Moreau's decomposition
    /// `dist(x*, N(x̄)) = ‖Π_T(x*)‖` with `T` the tangent cone, so the test is exact.
    /// The margin is `ε − ‖Π_T(x*)‖`.
    pub fn eps_normal_contains(&self, xbar: &[f64], xstar: &[f64], eps: f64, tol: f64) -> Result<Trit, SetError> {
        if eps.is_nan() || eps < 0.0 {
            return Err(SetError::NegativeEps(eps));
        }
        if !self.is_convex_variant() {
            return Err(SetError::NotConvex);
        }
        if xstar.len() != self.dim() {
            return Err(SetError::DimMismatch { expected: self.dim(), got: xstar.len() });
        }
        let cone = self.tangent_cone(xbar)?;
        let residual = norm(&cone.project(xstar));
        let margin = eps - residual;
        let verdict = if margin >= -tol { Verdict::In } else { Verdict::Out };
        Ok(Trit { verdict, margin })
    }

    /// `{s ∈ ℝ : p + s·u ∈ S}`, as a closed interval union.
    pub fn line_preimage(&self, p: &[f64], u: &[f64]) -> IntervalSet {
        match self {
            ClosedSet::Interval1D(s) => {
                if u[0] == 0.0 {
                    return if s.contains(p[0]) { IntervalSet::real_line() } else { IntervalSet::empty() };
                }
                s.affine(1.0 / u[0], -p[0] / u[0]).expect("nonzero direction").closure()
            }
            ClosedSet::Box { lo, hi } => {
                let mut out = IntervalSet::real_line();
                for i in 0..p.len() {
                    let slab = IntervalSet::single(
                        Interval::new(lo[i], hi[i], true, true).unwrap_or_else(Interval::real_line),
                    );
                    let section = ClosedSet::Interval1D(slab).line_preimage(&p[i..=i], &u[i..=i]);
                    out = out.intersect(&section);
                }
                out
            }
            ClosedSet::PolytopeH { rows, .. } => {
                let mut out = IntervalSet::real_line();
                for r in rows {
                    // r·p + s (r·u) ≤ offset
                    let slope = dot(&r.normal, u);
                    let rhs = r.offset - dot(&r.normal, p);
                    let scale = 1e-12 * (1.0 + r.offset.abs());
                    let piece = if slope.abs() <= 1e-15 {
                        if rhs >= -scale { IntervalSet::real_line() } else { IntervalSet::empty() }
                    } else if slope > 0.0 {
                        IntervalSet::at_most(rhs / slope)
                    } else {
                        IntervalSet::at_least(rhs / slope)
                    };
                    out = out.intersect(&piece);
                }
                out
            }
            ClosedSet::Segment { a, b } => segment_line_preimage(a, b, p, u),
            ClosedSet::FiniteUnion { members, .. } => members
                .iter()
                .fold(IntervalSet::empty(), |acc, m| acc.union(&m.line_preimage(p, u))),
        }
    }
}

fn unit(n: usize, i: usize, s: f64) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = s;
    v
}

// Orthonormal basis of d⊥ by Gram–Schmidt on the standard basis.
fn orthogonal_complement(d: &[f64]) -> Vec<Vec<f64>> {
    let n = d.len();
    let dn: Vec<f64> = d.iter().map(|v| v / norm(d)).collect();
    let mut basis: Vec<Vec<f64>> = vec![dn];
    for i in 0..n {
        let mut w = unit(n, i, 1.0);
        for q in &basis {
            let c = dot(&w, q);
            w = axpy(&w, -c, q);
        }
        let nw = norm(&w);
        if nw > 1e-8 {
            basis.push(w.iter().map(|v| v / nw).collect());
        }
        if basis.len() == n {
            break;
        }
    }
    basis.split_off(1)
}

fn segment_line_preimage(a: &[f64], b: &[f64], p: &[f64], u: &[f64]) -> IntervalSet {
    let d = sub(b, a);
    let uu = dot(u, u);
    let scale = 1e-10 * (1.0 + norm(a) + norm(b) + norm(p));
    // parameters of a and b along the line, with residual distances
    let s_a = dot(&sub(a, p), u) / uu;
    let s_b = dot(&sub(b, p), u) / uu;
    let off_a = dist(a, &axpy(p, s_a, u));
    let off_b = dist(b, &axpy(p, s_b, u));
    if off_a <= scale && off_b <= scale {
        return IntervalSet::closed(s_a.min(s_b), s_a.max(s_b));
    }
    // transversal: solve p + s u = a + t d in least squares
    let m = DMatrix::from_fn(p.len(), 2, |i, j| if j == 0 { u[i] } else { -d[i] });
    let rhs = DVector::from_iterator(p.len(), a.iter().zip(p).map(|(x, y)| x - y));
    let normal = m.transpose() * &m;
    let Some(sol) = normal.lu().solve(&(m.transpose() * &rhs)) else {
        return IntervalSet::empty();
    };
    let (s, t) = (sol[0], sol[1]);
    let hit = axpy(p, s, u);
    if (-1e-12..=1.0 + 1e-12).contains(&t) && dist(&hit, &axpy(a, t, &d)) <= scale {
        IntervalSet::point(s)
    } else {
        IntervalSet::empty()
    }
}

fn interval_tangent(s: &IntervalSet, x: f64) -> IntervalSet {
    let tol = ON_SET_TOL * (1.0 + x.abs());
    let mut left = false;
    let mut right = false;
    for p in s.parts() {
        if p.lo_f64() - tol <= x && x <= p.hi_f64() + tol {
            left |= p.lo_f64() < x - tol;
            right |= p.hi_f64() > x + tol;
        }
    }
    cone_from_sides(left, right)
}

/// The 1-D cone with the given accessible sides: ℝ, [0,∞), (−∞,0] or {0}.
pub fn cone_from_sides(left: bool, right: bool) -> IntervalSet {
    match (left, right) {
        (true, true) => IntervalSet::real_line(),
        (false, true) => IntervalSet::at_least(0.0),
        (true, false) => IntervalSet::at_most(0.0),
        (false, false) => IntervalSet::point(0.0),
    }
}

impl ConeRep {
    pub fn dim(&self) -> usize {
        match self {
            ConeRep::Interval(_) => 1,
            ConeRep::Polyhedral { dim, .. } => *dim,
            ConeRep::Union(cs) => cs.first().map_or(1, ConeRep::dim),
        }
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        dist(v, &self.project(v)) <= tol
    }

    /// Nearest point of the cone.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        match self {
            ConeRep::Interval(s) => vec![s.nearest(v[0]).unwrap_or(0.0)],
            ConeRep::Polyhedral { rows, .. } => {
                let hs: Vec<HalfSpace> = rows.iter().map(|r| HalfSpace::new(r.clone(), 0.0)).collect();
                project_polyhedron(&hs, v).expect("a cone contains the origin")
            }
            ConeRep::Union(cs) => {
                let mut best: Option<(f64, Vec<f64>)> = None;
                for c in cs {
                    let p = c.project(v);
                    let d = dist(&p, v);
                    if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                        best = Some((d, p));
                    }
                }
                best.map_or_else(|| vec![0.0; v.len()], |(_, p)| p)
            }
        }
    }

    /// Converts a cone on the line to its interval form.
    pub fn to_interval(&self) -> ConeRep {
        if let ConeRep::Interval(_) = self {
            return self.clone();
        }
        let tol = 1e-12;
        ConeRep::Interval(cone_from_sides(self.contains(&[-1.0], tol), self.contains(&[1.0], tol)))
    }

    pub fn as_interval(&self) -> Option<&IntervalSet> {
        match self {
            ConeRep::Interval(s) => Some(s),
            _ => None,
        }
    }
}

/// The duality mapping of a Euclidean space, which is the identity.
pub fn duality_map(v: &[f64]) -> Vec<f64> {
    v.to_vec()
}

/// Projection onto `{y : rᵢ·y ≤ bᵢ}` by enumerating active sets of size ≤ n and keeping the
/// closest KKT point. Returns `None` when the polyhedron is empty.
pub(crate) fn project_polyhedron(rows: &[HalfSpace], x: &[f64]) -> Option<Vec<f64>> {
    let feasible = |y: &[f64]| rows.iter().all(|r| r.value(y) <= r.slack_tol(y));
    if feasible(x) {
        return Some(x.to_vec());
    }
    let n = x.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut subset = Vec::new();
    for k in 1..=n.min(rows.len()) {
        enumerate_subsets(rows.len(), k, 0, &mut subset, &mut |active| {
            let a = DMatrix::from_fn(active.len(), n, |i, j| rows[active[i]].normal[j]);
            let r = DVector::from_iterator(active.len(), active.iter().map(|&i| rows[i].value(x)));
            let gram = &a * a.transpose();
            let Some(lambda) = gram.lu().solve(&r) else { return };
            if lambda.iter().any(|l| *l < -1e-12 || !l.is_finite()) {
                return;
            }
            let step = a.transpose() * lambda;
            let y: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi - si).collect();
            if !feasible(&y) {
                return;
            }
            let d = dist(&y, x);
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, y));
            }
        });
    }
    best.map(|(_, y)| y)
}

fn enumerate_subsets(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..m {
        cur.push(i);
        enumerate_subsets(m, k, i + 1, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(s: &str) -> ClosedSet {
        ClosedSet::interval_1d(s.parse().unwrap()).unwrap()
    }

    fn unit_square() -> ClosedSet {
        ClosedSet::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()
    }

    fn triangle() -> ClosedSet {
        // x ≥ 0, y ≥ 0, x + y ≤ 1
        ClosedSet::polytope(
            2,
            vec![
                HalfSpace::new(vec![-1.0, 0.0], 0.0),
                HalfSpace::new(vec![0.0, -1.0], 0.0),
                HalfSpace::new(vec![1.0, 1.0], 1.0),
            ],
            true,
        )
        .unwrap()
    }

    #[test]
    fn contains_examples() {
        assert!(iv("[0, inf)").contains(&[0.0], 0.0));
        assert!(!iv("[-0.5, 0]").contains(&[0.1], 1e-9));
        let seg = ClosedSet::segment(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(seg.contains(&[0.5, 0.5], 1e-12));
        assert!(!seg.contains(&[0.5, 0.6], 1e-3));
    }

    #[test]
    fn project_examples() {
        assert_eq!(iv("[0, 1]").project(&[2.0]).unwrap(), vec![1.0]);
        assert_eq!(unit_square().project(&[2.0, -1.0]).unwrap(), vec![1.0, 0.0]);
        let seg = ClosedSet::segment(vec![0.0, 0.0], vec![2.0, 0.0]).unwrap();
        assert_eq!(seg.project(&[1.0, 5.0]).unwrap(), vec![1.0, 0.0]);
        // oracle: the hypotenuse x + y = 1 is hit orthogonally at (0.5, 0.5) + ((a - b)/2)(1, -1)
        let p = triangle().project(&[1.0, 0.6]).unwrap();
        assert!(dist(&p, &[0.7, 0.3]) < 1e-12);
        assert_eq!(triangle().project(&[-1.0, -2.0]).unwrap(), vec![0.0, 0.0]);
        let union = ClosedSet::union(vec![iv("[0, 1]"), iv("[3, 4]")]).unwrap();
        assert_eq!(union.project(&[2.0]), Err(SetError::NotConvex));
    }

    #[test]
    fn tangent_cone_examples() {
        let t = |s: &ClosedSet, x: f64| s.tangent_cone(&[x]).unwrap().as_interval().unwrap().to_string();
        assert_eq!(t(&iv("[0, inf)"), 0.0), "[0, inf)");
        assert_eq!(t(&iv("[-0.5, 0]"), 0.0), "(-inf, 0]");
        assert_eq!(t(&iv("[-0.5, 0]"), -0.25), "(-inf, inf)");
        assert_eq!(t(&iv("{2}"), 2.0), "{0}");
        assert!(matches!(iv("[0, 1]").tangent_cone(&[2.0]), Err(SetError::NotInSet(_))));
        let seg = ClosedSet::segment(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(t(&seg, 0.0), "[0, inf)");
        let corner = unit_square().tangent_cone(&[0.0, 0.0]).unwrap();
        assert!(corner.contains(&[1.0, 2.0], 1e-12));
        assert!(!corner.contains(&[-1.0, 2.0], 1e-3));
    }

    #[test]
    fn eps_normal_examples() {
        let half = iv("[0, inf)");
        assert!(half.eps_normal_contains(&[0.0], &[-1.0], 0.0, 1e-12).unwrap().is_in());
        assert!(half.eps_normal_contains(&[0.0], &[1.0], 0.5, 1e-12).unwrap().is_out());
        assert!(triangle().eps_normal_contains(&[0.3, 0.3], &[0.0, 0.0], 0.0, 0.0).unwrap().is_in());
        assert_eq!(half.eps_normal_contains(&[0.0], &[0.0], -1.0, 0.0), Err(SetError::NegativeEps(-1.0)));
        // at the corner (1, 0) of the triangle the normal cone is spanned by (1, 1) and (0, -1)
        assert!(triangle().eps_normal_contains(&[1.0, 0.0], &[2.0, -1.0], 0.0, 1e-12).unwrap().is_in());
    }

    #[test]
    fn duality_is_identity() {
        assert_eq!(duality_map(&[1.0, 2.0]), vec![1.0, 2.0]);
        assert_eq!(duality_map(&[0.0]), vec![0.0]);
        assert_eq!(duality_map(&[-3.0]), vec![-3.0]);
    }

    #[test]
    fn line_preimages() {
        let p = [0.0, 0.0];
        let u = [std::f64::consts::FRAC_1_SQRT_2; 2];
        let pre = unit_square().line_preimage(&p, &u);
        assert!(pre.approx_eq(&IntervalSet::closed(0.0, 2f64.sqrt()), 1e-12));
        let tri = triangle().line_preimage(&p, &u);
        assert!(tri.approx_eq(&IntervalSet::closed(0.0, 0.5 * 2f64.sqrt()), 1e-12));
        let seg = ClosedSet::segment(vec![1.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert!(seg.line_preimage(&p, &u).approx_eq(&IntervalSet::point(2f64.sqrt()), 1e-12));
    }

    fn arb_set() -> impl Strategy<Value = ClosedSet> {
        prop_oneof![
            Just(iv("[0, inf)")),
            Just(iv("[-0.5, 0]")),
            Just(iv("[-1, 0] u [1, 2]")),
            Just(unit_square()),
            Just(triangle()),
            Just(ClosedSet::segment(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()),
            Just(ClosedSet::union(vec![unit_square(), ClosedSet::segment(vec![1.0, 1.0], vec![2.0, 0.0]).unwrap()]).unwrap()),
        ]
    }

    fn point_on(s: &ClosedSet, raw: &[f64]) -> Vec<f64> {
        s.nearest(&raw[..s.dim()])
    }

    proptest! {
        #[test]
        fn tangent_cone_is_a_cone(s in arb_set(), raw in prop::array::uniform2(-2.0f64..2.0),
                                  dir in prop::array::uniform2(-1.0f64..1.0), t in 0.0f64..10.0) {
            let x = point_on(&s, &raw);
            let cone = s.tangent_cone(&x).unwrap();
            let v = cone.project(&dir[..s.dim()]);
            prop_assert!(cone.contains(&vec![0.0; s.dim()], 1e-12));
            let tv: Vec<f64> = v.iter().map(|c| c * t).collect();
            prop_assert!(cone.contains(&tv, 1e-9 * (1.0 + t)));
        }

        #[test]
        fn tangent_cone_matches_definition(s in arb_set(), raw in prop::array::uniform2(-2.0f64..2.0),
                                           dir in prop::array::uniform2(-1.0f64..1.0)) {
            let x = point_on(&s, &raw);
            let d = &dir[..s.dim()];
            prop_assume!(norm(d) > 0.1);
            let v: Vec<f64> = d.iter().map(|c| c / norm(d)).collect();
            let cone = s.tangent_cone(&x).unwrap();
            let quotient = |j: i32| {
                let t = 2f64.powi(-j);
                s.dist(&axpy(&x, t, &v)) / t
            };
            let gap = dist(&v, &cone.project(&v));
            if gap == 0.0 {
                prop_assert!(quotient(20) <= 1e-6);
            } else if gap > 0.1 {
                prop_assert!(quotient(20) > 0.05);
            }
        }

        #[test]
        fn projection_idempotent_nonexpansive(s in arb_set().prop_filter("convex", |s| s.is_convex_variant()),
                                              a in prop::array::uniform2(-3.0f64..3.0),
                                              b in prop::array::uniform2(-3.0f64..3.0)) {
            let n = s.dim();
            let pa = s.project(&a[..n]).unwrap();
            let pb = s.project(&b[..n]).unwrap();
            prop_assert!(dist(&s.project(&pa).unwrap(), &pa) <= 1e-12);
            prop_assert!(dist(&pa, &pb) <= dist(&a[..n], &b[..n]) + 1e-12);
        }

        #[test]
        fn eps_normals_monotone_and_inflated(s in arb_set().prop_filter("convex", |s| s.is_convex_variant()),
                                             raw in prop::array::uniform2(-2.0f64..2.0),
                                             xs in prop::array::uniform2(-2.0f64..2.0),
                                             ball in prop::array::uniform2(-1.0f64..1.0),
                                             e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
            let n = s.dim();
            let x = point_on(&s, &raw);
            let (lo, hi) = (e1.min(e2), e1.max(e2));
            if s.eps_normal_contains(&x, &xs[..n], lo, 1e-12).unwrap().is_in() {
                prop_assert!(s.eps_normal_contains(&x, &xs[..n], hi, 1e-12).unwrap().is_in());
            }
            // a normal vector: x* − Π_T x* is in the polar cone by Moreau
            let cone = s.tangent_cone(&x).unwrap();
            let normal = sub(&xs[..n], &cone.project(&xs[..n]));
            let b = &ball[..n];
            let scale = if norm(b) > 1.0 { 1.0 / norm(b) } else { 1.0 };
            let shifted = axpy(&normal, hi * scale, b);
            prop_assert!(s.eps_normal_contains(&x, &shifted, hi, 1e-9).unwrap().is_in());
        }
    }
}
