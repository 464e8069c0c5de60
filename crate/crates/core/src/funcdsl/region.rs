//! Guard regions: finite unions of cells, each cell a conjunction of linear constraints.
//! Membership is decided exactly, so breakpoint ownership follows the written guard.

use crate::interval::{Interval, IntervalSet};
use crate::sets::{dot, ClosedSet};

/// `a·x ≤ b`, or `a·x < b` when `strict`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinCon {
    pub a: Vec<f64>,
    pub b: f64,
    pub strict: bool,
}

impl LinCon {
    pub fn holds(&self, x: &[f64]) -> bool {
        let v = dot(&self.a, x);
        if self.strict {
            v < self.b
        } else {
            v <= self.b
        }
    }

    fn negate(&self) -> LinCon {
        LinCon { a: self.a.iter().map(|v| -v).collect(), b: -self.b, strict: !self.strict }
    }

    /// Solution set on the line in one dimension.
    fn to_interval_set(&self) -> IntervalSet {
        let a = self.a[0];
        if a == 0.0 {
            let ok = if self.strict { 0.0 < self.b } else { 0.0 <= self.b };
            return if ok { IntervalSet::real_line() } else { IntervalSet::empty() };
        }
        let t = self.b / a;
        let iv = if a > 0.0 {
            Interval::new(f64::NEG_INFINITY, t, false, !self.strict)
        } else {
            Interval::new(t, f64::INFINITY, !self.strict, false)
        };
        iv.map_or_else(IntervalSet::empty, IntervalSet::single)
    }
}

/// Union of cells; a cell with no constraints is the whole space, no cells is the empty set.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub dim: usize,
    pub cells: Vec<Vec<LinCon>>,
}

impl Region {
    pub fn all(dim: usize) -> Region {
        Region { dim, cells: vec![Vec::new()] }
    }

    pub fn empty(dim: usize) -> Region {
        Region { dim, cells: Vec::new() }
    }

    pub fn constraint(con: LinCon) -> Region {
        Region { dim: con.a.len(), cells: vec![vec![con]] }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.cells.iter().any(|c| c.iter().all(|k| k.holds(x)))
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Region { dim: self.dim, cells }
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                cells.push(c);
            }
        }
        Region { dim: self.dim, cells }.pruned()
    }

    pub fn complement(&self) -> Region {
        let mut out = Region::all(self.dim);
        for cell in &self.cells {
            let negated = Region {
                dim: self.dim,
                cells: cell.iter().map(|k| vec![k.negate()]).collect(),
            };
            out = out.intersect(&negated);
        }
        out
    }

    // drops cells that are empty in one dimension, keeping the representation small
    fn pruned(mut self) -> Region {
        if self.dim == 1 {
            self.cells.retain(|c| !cell_interval(c).is_empty());
        }
        self
    }

    /// The region as an interval union (one dimension only).
    pub fn to_interval_set(&self) -> IntervalSet {
        assert_eq!(self.dim, 1, "interval form exists only on the line");
        self.cells.iter().fold(IntervalSet::empty(), |acc, c| acc.union(&cell_interval(c)))
    }

    pub fn from_interval_set(s: &IntervalSet) -> Region {
        let cells = s
            .parts()
            .iter()
            .map(|p| {
                let mut cell = Vec::new();
                if p.lo_f64().is_finite() {
                    cell.push(LinCon { a: vec![-1.0], b: -p.lo_f64(), strict: !p.lo_closed() });
                }
                if p.hi_f64().is_finite() {
                    cell.push(LinCon { a: vec![1.0], b: p.hi_f64(), strict: !p.hi_closed() });
                }
                cell
            })
            .collect();
        Region { dim: 1, cells }
    }

    pub fn from_closed_set(s: &ClosedSet) -> Region {
        let dim = s.dim();
        match s {
            ClosedSet::Interval1D(iv) => Region::from_interval_set(iv),
            ClosedSet::Box { lo, hi } => {
                let mut cell = Vec::new();
                for i in 0..dim {
                    let mut e = vec![0.0; dim];
                    if lo[i].is_finite() {
                        e[i] = -1.0;
                        cell.push(LinCon { a: e.clone(), b: -lo[i], strict: false });
                    }
                    if hi[i].is_finite() {
                        e[i] = 1.0;
                        cell.push(LinCon { a: e.clone(), b: hi[i], strict: false });
                    }
                }
                Region { dim, cells: vec![cell] }
            }
            ClosedSet::PolytopeH { rows, .. } => Region {
                dim,
                cells: vec![rows
                    .iter()
                    .filter(|r| r.offset.is_finite())
                    .map(|r| LinCon { a: r.normal.clone(), b: r.offset, strict: false })
                    .collect()],
            },
            ClosedSet::Segment { a, b } => {
                // the line through a and b, cut at both endpoints
                let d: Vec<f64> = b.iter().zip(a).map(|(p, q)| p - q).collect();
                let mut cell = Vec::new();
                for w in orthogonal_rows(&d) {
                    let off = dot(&w, a);
                    cell.push(LinCon { a: w.clone(), b: off, strict: false });
                    cell.push(LinCon { a: w.iter().map(|v| -v).collect(), b: -off, strict: false });
                }
                cell.push(LinCon { a: d.iter().map(|v| -v).collect(), b: -dot(&d, a), strict: false });
                cell.push(LinCon { a: d.clone(), b: dot(&d, b), strict: false });
                Region { dim, cells: vec![cell] }
            }
            ClosedSet::FiniteUnion { members, .. } => members
                .iter()
                .fold(Region::empty(dim), |acc, m| acc.union(&Region::from_closed_set(m))),
        }
    }

    /// `{s : p + s·u ∈ region}` as a one-dimensional region.
    pub fn restrict_to_line(&self, p: &[f64], u: &[f64]) -> Region {
        let cells = self
            .cells
            .iter()
            .map(|c| {
                c.iter()
                    .map(|k| LinCon { a: vec![dot(&k.a, u)], b: k.b - dot(&k.a, p), strict: k.strict })
                    .collect()
            })
            .collect();
        Region { dim: 1, cells }.pruned()
    }
}

fn cell_interval(cell: &[LinCon]) -> IntervalSet {
    cell.iter().fold(IntervalSet::real_line(), |acc, k| acc.intersect(&k.to_interval_set()))
}

// Integer-friendly normals orthogonal to d (exact for axis and diagonal directions).
fn orthogonal_rows(d: &[f64]) -> Vec<Vec<f64>> {
    match d.len() {
        1 => Vec::new(),
        2 => vec![vec![-d[1], d[0]]],
        _ => {
            let candidates = [
                vec![0.0, -d[2], d[1]],
                vec![d[2], 0.0, -d[0]],
                vec![-d[1], d[0], 0.0],
            ];
            let mut rows: Vec<Vec<f64>> = candidates.into_iter().filter(|w| w.iter().any(|v| *v != 0.0)).collect();
            rows.truncate(2);
            rows
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(a: f64, b: f64) -> Region {
        Region::constraint(LinCon { a: vec![a], b, strict: false })
    }

    #[test]
    fn one_dimensional_forms() {
        let r = le(1.0, 0.0).union(&le(-1.0, -2.0)); // x ≤ 0 or x ≥ 2
        assert_eq!(r.to_interval_set().to_string(), "(-inf, 0] u [2, inf)");
        assert_eq!(r.complement().to_interval_set().to_string(), "(0, 2)");
        let s: IntervalSet = "[-1, 0) u {3}".parse().unwrap();
        assert_eq!(Region::from_interval_set(&s).to_interval_set(), s);
    }

    #[test]
    fn membership_is_exact_at_boundaries() {
        let open = Region::constraint(LinCon { a: vec![-1.0], b: 1.0, strict: true }); // x > -1
        assert!(!open.contains(&[-1.0]));
        assert!(open.contains(&[-0.999999999999]));
        assert!(open.complement().contains(&[-1.0]));
    }

    #[test]
    fn line_restriction() {
        let tri = ClosedSet::polytope(
            2,
            vec![
                crate::sets::HalfSpace::new(vec![-1.0, 0.0], 0.0),
                crate::sets::HalfSpace::new(vec![0.0, -1.0], 0.0),
                crate::sets::HalfSpace::new(vec![1.0, 1.0], 1.0),
            ],
            true,
        )
        .unwrap();
        let r = Region::from_closed_set(&tri).restrict_to_line(&[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(r.to_interval_set().to_string(), "[0, 0.5]");
        let seg = ClosedSet::segment(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(Region::from_closed_set(&seg).contains(&[0.25, 0.25]));
        assert!(!Region::from_closed_set(&seg).contains(&[0.25, 0.3]));
    }
}
