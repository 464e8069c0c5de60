//! Piecewise extended-real functions with disjoint guards.

use std::collections::BTreeMap;

use thiserror::Error;

use super::expr::{roots_1d, EvalError, Expr};
use super::parse::{parse_expr, parse_ext_constant, parse_guard, ParseError};
use super::region::Region;
use crate::extreal::{ext_add, ExtReal};
use crate::interval::IntervalSet;
use crate::sets::ClosedSet;

/// Membership tolerance for restriction masks.
pub const MASK_TOL: f64 = 1e-12;

// Clip for root scans on unbounded guards.
const SCAN_CLIP: f64 = 1e4;
const SCAN_CELLS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuncError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("pieces {0} and {1} overlap near {2:?}")]
    Overlap(usize, usize, Vec<f64>),
    #[error("piece {piece}: denominator vanishes inside the guard at {at}")]
    PoleInGuard { piece: usize, at: f64 },
    #[error("piece {piece}: split required at {at} (absolute value changes sign inside the guard)")]
    SplitRequired { piece: usize, at: f64 },
    #[error("piece {piece}: {err}")]
    Eval { piece: usize, err: EvalError },
    #[error("dimension mismatch: function has dimension {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("piece index {0} out of range")]
    NoSuchPiece(usize),
    #[error("operation requires a one-dimensional function")]
    NotOneDimensional,
    #[error("scale factor must be positive, got {0}")]
    BadScale(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub guard: Region,
    pub expr: Expr,
}

/// `f(x) = expr_i(x)` when `x` satisfies guard `i`, `default` when no guard holds, and `+∞`
/// outside any restriction mask.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseFunc {
    pub dim: usize,
    pub pieces: Vec<Piece>,
    pub default: ExtReal,
    pub masks: Vec<ClosedSet>,
}

impl PiecewiseFunc {
    /// Builds and validates a function.
    pub fn new(dim: usize, pieces: Vec<Piece>, default: ExtReal) -> Result<PiecewiseFunc, FuncError> {
        let f = PiecewiseFunc { dim, pieces, default, masks: Vec::new() };
        f.validate()?;
        Ok(f)
    }

    /// A single formula valid everywhere.
    pub fn formula(dim: usize, src: &str) -> Result<PiecewiseFunc, FuncError> {
        let expr = parse_expr(src, dim)?;
        PiecewiseFunc::new(dim, vec![Piece { guard: Region::all(dim), expr }], ExtReal::PosInf)
    }

    pub fn constant(dim: usize, c: ExtReal) -> PiecewiseFunc {
        PiecewiseFunc { dim, pieces: Vec::new(), default: c, masks: Vec::new() }
    }

    /// Parses `(guard, formula)` pairs and a default value.
    pub fn from_source(
        dim: usize,
        pieces: &[(&str, &str)],
        default: &str,
        sets: &BTreeMap<String, ClosedSet>,
    ) -> Result<PiecewiseFunc, FuncError> {
        let parsed = pieces
            .iter()
            .map(|(g, e)| Ok(Piece { guard: parse_guard(g, dim, sets)?, expr: parse_expr(e, dim)? }))
            .collect::<Result<Vec<_>, FuncError>>()?;
        PiecewiseFunc::new(dim, parsed, parse_ext_constant(default)?)
    }

    /// Checks guard disjointness and that no denominator vanishes inside its guard.
    pub fn validate(&self) -> Result<(), FuncError> {
        for p in &self.pieces {
            if p.expr.arity() > self.dim || p.guard.dim != self.dim {
                return Err(FuncError::DimMismatch { expected: self.dim, got: p.expr.arity().max(p.guard.dim) });
            }
        }
        if self.dim == 1 {
            let sets: Vec<IntervalSet> = self.pieces.iter().map(|p| p.guard.to_interval_set()).collect();
            for i in 0..sets.len() {
                for j in i + 1..sets.len() {
                    let common = sets[i].intersect(&sets[j]);
                    if let Some(iv) = common.parts().first() {
                        return Err(FuncError::Overlap(i, j, vec![representative(iv.lo_f64(), iv.hi_f64())]));
                    }
                }
                for at in self.poles_1d(i, &sets[i]) {
                    return Err(FuncError::PoleInGuard { piece: i, at });
                }
            }
        } else {
            for x in grid_points(self.dim, 4.0, 17) {
                let hits: Vec<usize> = (0..self.pieces.len()).filter(|&i| self.pieces[i].guard.contains(&x)).collect();
                if hits.len() > 1 {
                    return Err(FuncError::Overlap(hits[0], hits[1], x));
                }
            }
        }
        Ok(())
    }

    fn poles_1d(&self, piece: usize, guard: &IntervalSet) -> Vec<f64> {
        let mut denominators = Vec::new();
        self.pieces[piece].expr.visit(&mut |e| {
            if let Expr::Div(_, d) = e {
                denominators.push((**d).clone());
            }
        });
        let mut poles = Vec::new();
        for d in &denominators {
            for (lo, hi) in clipped_parts(guard) {
                poles.extend(roots_1d(d, lo, hi, SCAN_CELLS).into_iter().filter(|r| guard.contains(*r)));
                for end in [lo, hi] {
                    if guard.contains(end) && d.eval(&[end]).is_ok_and(|v| v == 0.0) {
                        poles.push(end);
                    }
                }
            }
        }
        poles
    }

    /// Index of the piece whose guard holds at `x`.
    pub fn piece_at(&self, x: &[f64]) -> Option<usize> {
        self.pieces.iter().position(|p| p.guard.contains(x))
    }

    pub fn in_masks(&self, x: &[f64]) -> bool {
        self.masks.iter().all(|m| m.contains(x, MASK_TOL))
    }

    pub fn eval(&self, x: &[f64]) -> Result<ExtReal, FuncError> {
        if x.len() != self.dim {
            return Err(FuncError::DimMismatch { expected: self.dim, got: x.len() });
        }
        if !self.in_masks(x) {
            return Ok(ExtReal::PosInf);
        }
        match self.piece_at(x) {
            Some(i) => self.pieces[i]
                .expr
                .eval(x)
                .map(ExtReal::from)
                .map_err(|err| FuncError::Eval { piece: i, err }),
            None => Ok(self.default),
        }
    }

    /// Value as `f64` with `±∞`; evaluation errors also map to `+∞` (outside the domain).
    pub fn value(&self, x: &[f64]) -> f64 {
        self.eval(x).map_or(f64::INFINITY, ExtReal::to_f64)
    }

    /// `f_Ω`: equal to `f` on `Ω` and `+∞` elsewhere.
    pub fn restrict(&self, omega: &ClosedSet) -> PiecewiseFunc {
        let mut g = self.clone();
        g.masks.push(omega.clone());
        g
    }

    /// Pointwise sum under `∞ − ∞ = ∞`.
    pub fn sum(&self, other: &PiecewiseFunc) -> Result<PiecewiseFunc, FuncError> {
        if self.dim != other.dim {
            return Err(FuncError::DimMismatch { expected: self.dim, got: other.dim });
        }
        let rest = |f: &PiecewiseFunc| {
            f.pieces.iter().fold(Region::empty(f.dim), |acc, p| acc.union(&p.guard)).complement()
        };
        let (rest_f, rest_g) = (rest(self), rest(other));
        let mut pieces = Vec::new();
        let mut push = |guard: Region, expr: Expr| {
            if !(guard.dim == 1 && guard.to_interval_set().is_empty()) && !guard.cells.is_empty() {
                pieces.push(Piece { guard, expr });
            }
        };
        for p in &self.pieces {
            for q in &other.pieces {
                push(p.guard.intersect(&q.guard), p.expr.clone() + q.expr.clone());
            }
            push(p.guard.intersect(&rest_g), p.expr.clone() + Expr::Const(other.default));
        }
        for q in &other.pieces {
            push(rest_f.intersect(&q.guard), Expr::Const(self.default) + q.expr.clone());
        }
        let mut masks = self.masks.clone();
        masks.extend(other.masks.iter().cloned());
        Ok(PiecewiseFunc { dim: self.dim, pieces, default: ext_add(self.default, other.default), masks })
    }

    /// `λ·f` for `λ > 0`.
    pub fn scale(&self, lambda: f64) -> Result<PiecewiseFunc, FuncError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(FuncError::BadScale(lambda));
        }
        let mut g = self.clone();
        for p in &mut g.pieces {
            p.expr = Expr::constant(lambda) * p.expr.clone();
        }
        g.default = match g.default {
            ExtReal::Finite(v) => ExtReal::Finite(lambda * v),
            inf => inf,
        };
        Ok(g)
    }

    /// `f + c`.
    pub fn shift(&self, c: f64) -> PiecewiseFunc {
        let mut g = self.clone();
        for p in &mut g.pieces {
            p.expr = p.expr.clone() + Expr::constant(c);
        }
        g.default = ext_add(g.default, ExtReal::from(c));
        g
    }

    /// Symbolic derivative of a one-dimensional piece, valid on the guard interior.
    pub fn piece_derivative(&self, piece: usize) -> Result<Expr, FuncError> {
        if self.dim != 1 {
            return Err(FuncError::NotOneDimensional);
        }
        let p = self.pieces.get(piece).ok_or(FuncError::NoSuchPiece(piece))?;
        let guard = p.guard.to_interval_set();
        let mut splits = Vec::new();
        p.expr.visit(&mut |e| {
            if let Expr::Abs(inner) = e {
                for (lo, hi) in clipped_parts(&guard) {
                    splits.extend(
                        roots_1d(inner, lo, hi, SCAN_CELLS)
                            .into_iter()
                            .filter(|r| *r > lo && *r < hi && guard.contains(*r)),
                    );
                }
            }
        });
        if let Some(at) = splits.first() {
            return Err(FuncError::SplitRequired { piece, at: *at });
        }
        Ok(p.expr.derivative(0))
    }

    /// Guards of all pieces as interval unions (one dimension).
    pub fn guard_sets_1d(&self) -> Vec<IntervalSet> {
        self.pieces.iter().map(|p| p.guard.to_interval_set()).collect()
    }

    /// Intersection of all restriction masks (one dimension).
    pub fn mask_set_1d(&self) -> IntervalSet {
        self.masks
            .iter()
            .fold(IntervalSet::real_line(), |acc, m| acc.intersect(&m.line_preimage(&[0.0], &[1.0])))
    }

    /// Points in `[lo, hi]` where the formula or domain may change: guard and mask endpoints,
    /// zeros of absolute-value arguments and of denominators.
    pub fn breakpoints_1d(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = Vec::new();
        let mut ends = |s: &IntervalSet| {
            for p in s.parts() {
                pts.extend([p.lo_f64(), p.hi_f64()].into_iter().filter(|v| v.is_finite()));
            }
        };
        for g in self.guard_sets_1d() {
            ends(&g);
        }
        ends(&self.mask_set_1d());
        for p in &self.pieces {
            p.expr.visit(&mut |e| match e {
                Expr::Abs(inner) | Expr::Div(_, inner) => pts.extend(roots_1d(inner, lo, hi, 512)),
                _ => {}
            });
        }
        pts.retain(|v| *v >= lo && *v <= hi);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `s ↦ f(p + s·u)` as a one-dimensional function.
    pub fn along_line(&self, p: &[f64], u: &[f64]) -> PiecewiseFunc {
        let sub = |i: usize| {
            if u[i] == 0.0 {
                Expr::constant(p[i])
            } else {
                Expr::constant(p[i]) + Expr::constant(u[i]) * Expr::Var(0)
            }
        };
        let pieces = self
            .pieces
            .iter()
            .map(|pc| Piece { guard: pc.guard.restrict_to_line(p, u), expr: pc.expr.substitute(&sub) })
            .collect();
        let mut masks = Vec::new();
        for m in &self.masks {
            match ClosedSet::interval_1d(m.line_preimage(p, u)) {
                Ok(s) => masks.push(s),
                Err(_) => return PiecewiseFunc::constant(1, ExtReal::PosInf),
            }
        }
        PiecewiseFunc { dim: 1, pieces, default: self.default, masks }
    }
}

fn representative(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        _ => 0.0,
    }
}

fn clipped_parts(s: &IntervalSet) -> Vec<(f64, f64)> {
    s.parts()
        .iter()
        .filter_map(|p| {
            let lo = p.lo_f64().max(-SCAN_CLIP);
            let hi = p.hi_f64().min(SCAN_CLIP);
            (lo <= hi).then_some((lo, hi))
        })
        .collect()
}

/// Regular grid of `per_dim^dim` points in `[-half, half]^dim`.
pub(crate) fn grid_points(dim: usize, half: f64, per_dim: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..per_dim)
        .map(|k| -half + 2.0 * half * k as f64 / (per_dim - 1) as f64)
        .collect();
    let mut pts = vec![Vec::new()];
    for _ in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(*a);
                    q
                })
            })
            .collect();
    }
    pts
}
