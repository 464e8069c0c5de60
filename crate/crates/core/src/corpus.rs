//! A fixed corpus of reference functions on the line: the worked examples, classic convex
//! and nonconvex shapes, piecewise-affine functions with jumps, and a function whose domain
//! has an isolated point. Shared by the property suites, the acceptance tests and the CLI.

use std::collections::BTreeMap;

use crate::funcdsl::PiecewiseFunc;
use crate::interval::IntervalSet;
use crate::sets::ClosedSet;

/// A function, the set it is considered relative to, and reference points in `Ω ∩ dom f`.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub func: PiecewiseFunc,
    pub omega: ClosedSet,
    pub points: Vec<f64>,
    /// Relatively Lipschitz near every reference point.
    pub lipschitz: bool,
}

/// A pair of functions on a common convex set with a reference point.
#[derive(Clone, Debug)]
pub struct SumPair {
    pub name: &'static str,
    pub f1: PiecewiseFunc,
    pub f2: PiecewiseFunc,
    pub omega: ClosedSet,
    pub point: f64,
    /// Both functions are smooth near the point.
    pub smooth: bool,
}

/// A function on a segment `[a, b]` with its expected convexity.
#[derive(Clone, Debug)]
pub struct SegmentCase {
    pub name: &'static str,
    pub func: PiecewiseFunc,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub convex: bool,
}

pub fn formula(src: &str) -> PiecewiseFunc {
    PiecewiseFunc::formula(1, src).expect("corpus formula")
}

pub fn piecewise(pieces: &[(&str, &str)], default: &str) -> PiecewiseFunc {
    PiecewiseFunc::from_source(1, pieces, default, &BTreeMap::new()).expect("corpus piecewise function")
}

pub fn interval(s: &str) -> ClosedSet {
    ClosedSet::interval_1d(s.parse::<IntervalSet>().expect("corpus interval")).expect("closed corpus interval")
}

/// `−∞` left of `0`, `0` at `0`, `+∞` right of it.
pub fn e1() -> PiecewiseFunc {
    piecewise(&[("x < 0", "-inf"), ("x = 0", "0")], "inf")
}

/// `1/(x+1) − 1` for `x > −1`, `+∞` otherwise.
pub fn e3_first() -> PiecewiseFunc {
    piecewise(&[("x > -1", "1/(x+1) - 1")], "inf")
}

/// `+∞` left of `0`, `0` at `0`, `−∞` right of it: lsc relative to `[−1/2, 0]` at `0` only.
pub fn e3_bad_second() -> PiecewiseFunc {
    piecewise(&[("x < 0", "inf"), ("x = 0", "0")], "-inf")
}

/// Indicator of `[0, 1]`.
pub fn indicator_unit() -> PiecewiseFunc {
    piecewise(&[("0 <= x <= 1", "0")], "inf")
}

/// Piecewise affine with an upward jump at `0` (right side) and a downward jump at `1`.
pub fn jumps() -> PiecewiseFunc {
    piecewise(&[("x <= 0", "-x"), ("0 < x < 1", "x + 1"), ("x >= 1", "0.5*x")], "inf")
}

/// Domain `{0} ∪ [1, 2]`.
pub fn isolated() -> PiecewiseFunc {
    piecewise(&[("x = 0", "0"), ("1 <= x <= 2", "x^2")], "inf")
}

pub fn entries() -> Vec<Entry> {
    let e = |name, func, omega: &str, points: &[f64], lipschitz| Entry {
        name,
        func,
        omega: interval(omega),
        points: points.to_vec(),
        lipschitz,
    };
    vec![
        e("e1", e1(), "[0, inf)", &[0.0], false),
        e("e2", formula("-abs(x)"), "(-inf, 0]", &[0.0, -0.5], true),
        e("e3_first", e3_first(), "[-0.5, 0]", &[0.0, -0.25, -0.5], true),
        e("e3_second", formula("-abs(x)"), "[-0.5, 0]", &[0.0, -0.25], true),
        e("e3_bad_second", e3_bad_second(), "[-0.5, 0]", &[0.0], false),
        e("e4_first", formula("exp(x) - 1"), "(-inf, 0]", &[0.0, -1.0], true),
        e("cube", formula("x^3/3"), "[0, 1]", &[0.0, 0.5, 1.0], true),
        e("cube_line", formula("x^3/3"), "(-inf, inf)", &[0.0, -0.7], true),
        e("indicator", indicator_unit(), "(-inf, inf)", &[0.0, 0.5, 1.0], false),
        e("abs", formula("abs(x)"), "(-inf, inf)", &[0.0, 0.3], true),
        e("neg_square", formula("-x^2"), "[-1, 1]", &[-1.0, 0.0, 0.5, 1.0], true),
        e("jumps", jumps(), "(-inf, inf)", &[0.0, 0.5, 1.0], false),
        e("isolated", isolated(), "(-inf, inf)", &[0.0, 1.0, 1.5, 2.0], false),
        e("kink_box", formula("abs(x - 0.5) + x^2"), "[-1, 1]", &[-1.0, 0.5, 0.9], true),
    ]
}

/// `(entry, point)` pairs for comparing the sampling estimator with the exact engine.
pub fn oracle_triples() -> Vec<(Entry, f64)> {
    entries()
        .into_iter()
        .flat_map(|e| e.points.clone().into_iter().map(move |p| (e.clone(), p)))
        .collect()
}

pub fn sum_pairs() -> Vec<SumPair> {
    let p = |name, f1, f2, omega: &str, point, smooth| SumPair { name, f1, f2, omega: interval(omega), point, smooth };
    vec![
        p("e3", e3_first(), formula("-abs(x)"), "[-0.5, 0]", 0.0, false),
        p("e4", formula("exp(x) - 1"), formula("-abs(x)"), "(-inf, 0]", 0.0, false),
        p("cube_minus_abs", formula("x^3/3"), formula("-abs(x)"), "[0, 1]", 0.5, true),
        p("square_plus_abs", formula("x^2"), formula("abs(x)"), "(-inf, inf)", 0.0, false),
        p("abs_minus_abs", formula("abs(x)"), formula("-abs(x)"), "[-1, 1]", 0.0, false),
        p("exp_plus_indicator", formula("exp(x)"), indicator_unit(), "(-inf, inf)", 0.0, false),
        p("square_plus_cube", formula("x^2"), formula("x^3/3"), "[-1, 1]", 0.5, true),
        p("exp_plus_square", formula("exp(x) - 1"), formula("x^2"), "(-inf, inf)", 0.0, true),
        p("quartic_plus_affine", formula("x^4"), formula("2*x - 1"), "[0, 2]", 1.0, true),
    ]
}

/// Twelve continuous functions on segments: six convex, six not.
pub fn segment_cases() -> Vec<SegmentCase> {
    let s = |name, src: &str, a: f64, b: f64, convex| {
        // rational formulas are guarded away from their poles
        let func = if src.contains('/') { piecewise(&[("x > -1", src)], "inf") } else { formula(src) };
        SegmentCase { name, func, a: vec![a], b: vec![b], convex }
    };
    vec![
        s("cube_unit", "x^3/3", 0.0, 1.0, true),
        s("abs", "abs(x)", -1.0, 1.0, true),
        s("square", "x^2", -1.0, 2.0, true),
        s("exp", "exp(x)", -1.0, 1.0, true),
        s("reciprocal", "1/(x+1)", 0.0, 1.0, true),
        s("kink_plus_square", "abs(x - 0.5) + x^2", -1.0, 1.0, true),
        s("neg_square", "-x^2", -1.0, 1.0, false),
        s("neg_abs", "-abs(x)", -1.0, 1.0, false),
        s("cube_sym", "x^3", -1.0, 1.0, false),
        s("bump", "exp(-x^2)", -2.0, 2.0, false),
        s("neg_exp", "-exp(x)", 0.0, 1.0, false),
        s("double_well", "x^4 - x^2", -1.0, 1.0, false),
    ]
}

/// Segments on which the function is relatively Lipschitz, including one in the plane.
pub fn lipschitz_segments() -> Vec<SegmentCase> {
    let mut out = segment_cases();
    let extra = [
        ("e2", formula("-abs(x)"), vec![-1.0], vec![0.0]),
        ("e3_first", e3_first(), vec![-0.5], vec![0.0]),
        ("e4_first", formula("exp(x) - 1"), vec![-1.0], vec![0.0]),
        ("indicator", indicator_unit(), vec![0.0], vec![1.0]),
        ("reversed_cube", formula("x^3/3"), vec![1.0], vec![0.0]),
        ("plane", PiecewiseFunc::formula(2, "x^2 + abs(y - 0.5)").expect("corpus formula"), vec![0.0, 0.0], vec![1.0, 1.0]),
    ];
    out.extend(extra.into_iter().map(|(name, func, a, b)| SegmentCase { name, func, a, b, convex: false }));
    out
}
