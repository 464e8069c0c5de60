//! End-user analyses: Fermat and sum-problem optimality tests, local minimizer scans,
//! mean-value witnesses, convexity and monotonicity testers, and the equivalence report
//! tying convexity to subdifferential monotonicity on a segment.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{
    convex_hypothesis, grid_split_search, lipschitz_hypothesis, lsc_hypothesis, CalculusError, Conclusion, FuzzyCertificate,
    Hypothesis, RuleReport,
};
use crate::funcdsl::lip::{default_radii, lip_estimate, LipError};
use crate::funcdsl::{FuncError, PiecewiseFunc};
use crate::interval::IntervalSet;
use crate::sets::ClosedSet;
use crate::subdiff::{
    dini, eps_regular_relative, limiting_relative, subdiff_1d, SegmentFrame, Side, SubdiffError, SubdiffKind,
};
use crate::verdict::{Trit, Verdict};

/// Tolerance for membership of `0` and for the analysis margins.
pub const OPT_TOL: f64 = 1e-9;
/// Half-width of the window scanned on unbounded sets.
pub const SCAN_HALF_WIDTH: f64 = 10.0;
/// Grid size for locating the minimizer in the mean-value construction.
pub const MEAN_VALUE_GRID: usize = 4096;
/// Grid size of the equivalence testers.
pub const EQUIVALENCE_GRID: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Subdiff(#[from] SubdiffError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Lip(#[from] LipError),
    #[error("function is not finite at the segment end {0:?}")]
    InfiniteEndpoint(Vec<f64>),
    #[error("the subdifferential at the minimizer {0} is empty although the function is Lipschitz")]
    EmptySubdifferential(f64),
    #[error("no approximate optimality certificate below {tol}; best residual {best}")]
    NoCertificate { best: f64, tol: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    FermatEps,
    FermatLimiting,
    SumExact,
    SumFuzzy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    NecessaryConditionHolds,
    Violated,
    Inconclusive,
}

/// Outcome of a necessary optimality test. `Violated` certifies that the point is not a
/// local minimizer and always carries a `gap` witness larger than `3·tol`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimalityVerdict {
    pub condition: Condition,
    pub verdict: Status,
    pub witness: BTreeMap<String, String>,
    pub non_optimality_certificate: bool,
    pub hypotheses: Vec<Hypothesis>,
    pub note: Option<String>,
}

impl OptimalityVerdict {
    fn new(condition: Condition) -> OptimalityVerdict {
        OptimalityVerdict {
            condition,
            verdict: Status::NecessaryConditionHolds,
            witness: BTreeMap::new(),
            non_optimality_certificate: false,
            hypotheses: Vec::new(),
            note: None,
        }
    }

    fn record(&mut self, key: &str, value: impl ToString) {
        self.witness.insert(key.to_string(), value.to_string());
    }

    /// Tests `0 ∈ set` and downgrades the verdict accordingly.
    fn test_zero(&mut self, label: &str, set: &IntervalSet) {
        let gap = set.dist(0.0);
        self.record(label, set);
        if gap > 3.0 * OPT_TOL {
            self.verdict = Status::Violated;
            self.non_optimality_certificate = true;
            self.record(&format!("gap: {label}"), gap);
        } else if gap > OPT_TOL && self.verdict == Status::NecessaryConditionHolds {
            self.verdict = Status::Inconclusive;
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Status::NecessaryConditionHolds
    }
}

/// `0 ∈ ∂̂^ε_Ω f(x̄)` for each listed `ε` and `0 ∈ ∂_Ω f(x̄)`.
pub fn fermat_check(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64, eps_list: &[f64]) -> Result<OptimalityVerdict, AnalysisError> {
    let mut v = OptimalityVerdict::new(if eps_list.is_empty() { Condition::FermatLimiting } else { Condition::FermatEps });
    for &eps in eps_list {
        let set = eps_regular_relative(f, omega, xbar, eps)?.set;
        v.test_zero(&format!("eps-regular at eps={eps}"), &set);
    }
    let lim = limiting_relative(f, omega, xbar)?.set;
    v.test_zero("limiting", &lim);
    Ok(v)
}

/// `0 ∈ ∂_C f₁(x̄) + ∂_C f₂(x̄)`, tested only when `C` is convex, `f₁` is relatively
/// Lipschitz and `f₂` is relatively lsc around `x̄`.
pub fn sum_optimality_check(
    f1: &PiecewiseFunc,
    f2: &PiecewiseFunc,
    c: &ClosedSet,
    xbar: f64,
) -> Result<OptimalityVerdict, AnalysisError> {
    let mut v = OptimalityVerdict::new(Condition::SumExact);
    v.hypotheses = vec![convex_hypothesis(c), lipschitz_hypothesis(f1, c, xbar), lsc_hypothesis(f2, c, xbar)];
    let s1 = limiting_relative(f1, c, xbar)?.set;
    let s2 = limiting_relative(f2, c, xbar)?.set;
    v.record("first", &s1);
    v.record("second", &s2);
    if let Some(failed) = v.hypotheses.iter().find(|h| !h.holds) {
        v.verdict = Status::Inconclusive;
        v.note = Some(match &failed.detail {
            Some(d) => format!("hypothesis failed: {} ({d})", failed.name),
            None => format!("hypothesis failed: {}", failed.name),
        });
        return Ok(v);
    }
    v.test_zero("sum", &s1.minkowski_sum(&s2));
    if let (Some(p), Some(q)) = (s1.nearest(0.0), s2.nearest(0.0)) {
        if let Some((a, b)) = crate::calculus::best_split(&s1, &s2, 0.0) {
            v.record("decomposition", format!("{a} + {b}"));
        } else {
            v.record("decomposition", format!("{p} + {q}"));
        }
    }
    Ok(v)
}

/// Approximate optimality: searches `xᵢ ∈ B(x̄, η) ∩ C` with `|fᵢ(xᵢ) − fᵢ(x̄)| ≤ η` and
/// `η̃ ∈ (0, 4η(ℓ + 1))` such that `0 ∈ ∂̂^{η̃}_C f₁(x₁) + ∂̂^{η̃}_C f₂(x₂)` up to `tol`.
pub fn approx_optimality_search(
    f1: &PiecewiseFunc,
    f2: &PiecewiseFunc,
    c: &ClosedSet,
    xbar: f64,
    eta: f64,
    tol: f64,
) -> Result<FuzzyCertificate, AnalysisError> {
    if !(eta > 0.0) {
        return Err(AnalysisError::Precondition(format!("eta = {eta} must be positive")));
    }
    let lip = lip_estimate(f1, c, &[xbar], &default_radii())?;
    let Some(ell) = lip.modulus() else {
        return Err(AnalysisError::Precondition(format!("first function is not relatively Lipschitz (estimate {})", lip.value)));
    };
    let cap = 4.0 * eta * (ell + 1.0);
    let eps_grid: Vec<f64> = (1..=8).map(|j| cap * 0.5f64.powi(j)).collect();
    let cert = grid_split_search(f1, f2, c, xbar, 0.0, eta, &eps_grid)?;
    match cert {
        Some(cert) if cert.gamma <= tol => Ok(cert),
        Some(cert) => Err(AnalysisError::NoCertificate { best: cert.gamma, tol }),
        None => Err(AnalysisError::NoCertificate { best: f64::INFINITY, tol }),
    }
}

/// A grid local minimizer of `f_Ω`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalMin {
    pub x: f64,
    pub value: f64,
    /// Distance to the nearest scanned point with a smaller value; `None` if there is none.
    pub basin_radius: Option<f64>,
}

fn golden_min(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (hi - r * (hi - lo), lo + r * (hi - lo));
    let (mut ga, mut gb) = (g(a), g(b));
    for _ in 0..100 {
        if ga <= gb {
            hi = b;
            (b, gb) = (a, ga);
            a = hi - r * (hi - lo);
            ga = g(a);
        } else {
            lo = a;
            (a, ga) = (b, gb);
            b = lo + r * (hi - lo);
            gb = g(b);
        }
        if hi - lo < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
    }
    if ga <= gb { a } else { b }
}

/// The point in `[lo, hi]` where the right Dini derivative of `f_Ω` crosses `slope` from
/// below, by bisection; `None` if the derivative is unavailable somewhere on the way.
fn slope_bisect(f: &PiecewiseFunc, omega: &ClosedSet, mut lo: f64, mut hi: f64, slope: f64) -> Option<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dini(f, omega, mid).ok()?.d_plus.to_f64() < slope {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Local minimizers of `f_Ω` on the line from a grid of `density` cells per component of
/// `Ω` (clipped to `[-10, 10]`, whose artificial ends are never reported), refined by
/// derivative bisection (golden-section search as a fallback) and snapped to breakpoints. Runs of equal minimal values collapse to their left end.
pub fn local_min_scan(f: &PiecewiseFunc, omega: &ClosedSet, density: usize) -> Result<Vec<LocalMin>, AnalysisError> {
    if omega.dim() != 1 {
        return Err(SubdiffError::NotOneDimensional(omega.dim()).into());
    }
    let g = f.restrict(omega);
    let value = |x: f64| g.value(&[x]);
    let window = omega.line_preimage(&[0.0], &[1.0]).intersect(&IntervalSet::closed(-SCAN_HALF_WIDTH, SCAN_HALF_WIDTH));
    let breaks = f.breakpoints_1d(-SCAN_HALF_WIDTH, SCAN_HALF_WIDTH);
    let density = density.max(2);
    let mut out = Vec::new();
    let mut all: Vec<(f64, f64)> = Vec::new();
    let mut components = Vec::new();
    for part in window.parts() {
        let (lo, hi) = (part.lo_f64(), part.hi_f64());
        let mut pts: Vec<f64> = (0..=density).map(|k| lo + (hi - lo) * k as f64 / density as f64).collect();
        pts.extend(breaks.iter().copied().filter(|b| part.contains(*b)));
        pts.retain(|x| part.contains(*x));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let vals: Vec<f64> = pts.iter().map(|&x| value(x)).collect();
        all.extend(pts.iter().copied().zip(vals.iter().copied()));
        components.push((pts, vals));
    }
    for (pts, vals) in &components {
        let n = pts.len();
        let is_min = |i: usize| {
            vals[i].is_finite()
                && (i == 0 || vals[i - 1] >= vals[i] || vals[i - 1].is_nan())
                && (i + 1 == n || vals[i + 1] >= vals[i] || vals[i + 1].is_nan())
        };
        // ends of the clipping window are not ends of Ω
        let cut = |i: usize| {
            let step = if i == 0 { -1e-6 } else { 1e-6 };
            (i == 0 || i + 1 == n) && omega.contains(&[pts[i] + step], 0.0)
        };
        for i in 0..n {
            if !is_min(i) || cut(i) || (i > 0 && is_min(i - 1) && vals[i - 1] == vals[i]) {
                continue;
            }
            let (mut x, mut v) = (pts[i], vals[i]);
            let fixed = breaks.contains(&x) || i == 0 || i + 1 == n;
            if !fixed && vals[i - 1].is_finite() && vals[i + 1].is_finite() {
                let t = slope_bisect(f, omega, pts[i - 1], pts[i + 1], 0.0)
                    .unwrap_or_else(|| golden_min(&value, pts[i - 1], pts[i + 1]));
                if value(t) <= v {
                    (x, v) = (t, value(t));
                }
            }
            if let Some(&b) = breaks.iter().find(|b| (*b - x).abs() <= 1e-9) {
                if value(b) <= v + 1e-12 {
                    (x, v) = (b, value(b));
                }
            }
            let basin_radius = all
                .iter()
                .filter(|(_, w)| *w < v - 1e-12)
                .map(|(y, _)| (y - x).abs())
                .min_by(f64::total_cmp);
            out.push(LocalMin { x, value: v, basin_radius });
        }
    }
    Ok(out)
}

/// [`local_min_scan`] along the segment `[a, b]`; returns points together with the results
/// in arclength.
pub fn local_min_scan_segment(
    f: &PiecewiseFunc,
    a: &[f64],
    b: &[f64],
    density: usize,
) -> Result<Vec<(Vec<f64>, LocalMin)>, AnalysisError> {
    let frame = SegmentFrame::new(a, b)?;
    let (g, omega) = frame.reduce(f);
    Ok(local_min_scan(&g, &omega, density)?.into_iter().map(|m| (frame.point(m.x), m)).collect())
}

/// Data of the mean-value construction on `[a, b]` with `φ(x) = f(x) + slope·‖x − b‖`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanValueWitness {
    /// Minimizer of `φ` on `[a, b)`.
    pub c: Vec<f64>,
    /// Arclength of `c` from `a`.
    pub c_param: f64,
    /// Chosen subgradient as a vector, `x* = s·u`.
    pub x_star: Vec<f64>,
    /// The scalar `s` along `u = (b − a)/‖b − a‖`.
    pub x_star_scalar: f64,
    /// The subdifferential of `f` relative to `[a, b]` at `c`, along `u`.
    pub subdiff: IntervalSet,
    pub phi_min: f64,
    pub increment: f64,
    /// `⟨x*, b − a⟩ − (f(b) − f(a))`.
    pub inequality_residual: f64,
    /// `⟨x*, b − c⟩ − (‖b − c‖/‖b − a‖)(f(b) − f(a))`.
    pub scaled_residual: f64,
    /// `−|⟨x*, b − a⟩ − (f(b) − f(a))|` when `c ≠ a`.
    pub equality_residual: Option<f64>,
    pub equality_case: bool,
    #[serde(skip)]
    pub trace: Vec<(f64, f64, f64)>,
}

impl MeanValueWitness {
    pub fn residuals_ok(&self, tol: f64) -> bool {
        self.inequality_residual >= -tol && self.scaled_residual >= -tol && self.equality_residual.is_none_or(|r| r >= -tol)
    }

    /// Trace with columns `t, f(a + tu), φ(a + tu)`.
    pub fn csv(&self) -> String {
        let mut s = String::from("t,f,phi\n");
        for (t, f, phi) in &self.trace {
            s.push_str(&format!("{t},{f},{phi}\n"));
        }
        s
    }
}

/// Minimizes `φ` over `[a, b]` (grid, then bisection on the sign of `φ`'s right Dini
/// derivative), preferring the smallest minimizing parameter, and extracts `x* ∈ ∂_{[a,b]} f(c)`.
/// When `c ≠ a` the element closest to the secant slope is used, otherwise the largest one.
pub fn mean_value_witness(f: &PiecewiseFunc, a: &[f64], b: &[f64]) -> Result<MeanValueWitness, AnalysisError> {
    let frame = SegmentFrame::new(a, b)?;
    let (g, omega) = frame.reduce(f);
    let len = frame.length;
    let gv = |t: f64| g.value(&[t]);
    let (fa, fb) = (gv(0.0), gv(len));
    if !fa.is_finite() {
        return Err(AnalysisError::InfiniteEndpoint(a.to_vec()));
    }
    if !fb.is_finite() {
        return Err(AnalysisError::InfiniteEndpoint(b.to_vec()));
    }
    let slope = (fb - fa) / len;
    let phi = |t: f64| gv(t) + slope * (len - t);
    let breaks = g.breakpoints_1d(0.0, len);
    let mut ts: Vec<f64> = (0..=MEAN_VALUE_GRID).map(|k| len * k as f64 / MEAN_VALUE_GRID as f64).collect();
    ts.extend(breaks.iter().copied().filter(|t| (0.0..=len).contains(t)));
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let trace: Vec<(f64, f64, f64)> = ts.iter().map(|&t| (t, gv(t), phi(t))).collect();
    let m = trace.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let k = trace.iter().position(|r| r.2 <= m + 1e-12 * (1.0 + m.abs())).expect("phi(a) is finite");
    let mut c = ts[k];
    if k > 0 && k + 1 < ts.len() && !breaks.contains(&c) {
        if let Some(t) = slope_bisect(&g, &omega, ts[k - 1], ts[k + 1], slope) {
            if phi(t) <= phi(c) {
                c = t;
            }
        }
    }
    if let Some(&bp) = breaks.iter().find(|bp| (*bp - c).abs() <= 1e-9) {
        if phi(bp) <= phi(c) + 1e-12 {
            c = bp;
        }
    }
    let set = subdiff_1d(&g, &omega, c, SubdiffKind::LimitingRelative)?.set;
    let equality_case = c > 0.0;
    let chosen = if equality_case {
        set.nearest(slope)
    } else {
        match set.sup() {
            Some(s) if s.is_finite() => Some(s.to_f64()),
            _ => set.nearest(slope),
        }
    };
    let Some(s) = chosen else {
        return Err(AnalysisError::EmptySubdifferential(c));
    };
    let increment = fb - fa;
    let inequality_residual = s * len - increment;
    Ok(MeanValueWitness {
        c: frame.point(c),
        c_param: c,
        x_star: frame.unit.iter().map(|u| s * u).collect(),
        x_star_scalar: s,
        subdiff: set,
        phi_min: phi(c),
        increment,
        inequality_residual,
        scaled_residual: s * (len - c) - (len - c) / len * increment,
        equality_residual: equality_case.then(|| -inequality_residual.abs()),
        equality_case,
        trace,
    })
}

/// Grid of `n + 1` arclength parameters on `[0, L]`.
fn param_grid(len: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|k| len * k as f64 / n as f64).collect()
}

/// Secant inequality `f(λx + (1−λ)y) ≤ λf(x) + (1−λ)f(y)` over all grid pairs on `[a, b]`
/// and `λ ∈ {1/8, …, 7/8}`. The margin is the smallest slack.
pub fn convexity_check(f: &PiecewiseFunc, a: &[f64], b: &[f64], grid: usize, tol: f64) -> Result<Trit, AnalysisError> {
    let frame = SegmentFrame::new(a, b)?;
    let (g, _) = frame.reduce(f);
    let ts = param_grid(frame.length, grid);
    let vals: Vec<f64> = ts.iter().map(|&t| g.value(&[t])).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Ok(Trit { verdict: Verdict::Unknown, margin: f64::NAN });
    }
    let mut margin = f64::INFINITY;
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            for k in 1..8 {
                let lam = k as f64 / 8.0;
                let mid = g.value(&[lam * ts[i] + (1.0 - lam) * ts[j]]);
                margin = margin.min(lam * vals[i] + (1.0 - lam) * vals[j] - mid);
            }
        }
    }
    Ok(Trit::from_margin(margin, tol))
}

/// Which subdifferential map a monotonicity test inspects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    /// `x ↦ ∂f_{[a,b]}(x)`.
    Restriction,
    /// `x ↦ ∂_{[a,b]} f(x)`.
    Relative,
}

/// Monotonicity on the line: `sup F(u) ≤ inf F(v)` for grid points `u < v` with nonempty
/// values. The margin is the smallest `inf F(v) − sup F(u)`.
pub fn monotonicity_check(kind: MapKind, f: &PiecewiseFunc, a: &[f64], b: &[f64], grid: usize, tol: f64) -> Result<Trit, AnalysisError> {
    let frame = SegmentFrame::new(a, b)?;
    let (g, omega) = frame.reduce(f);
    let sk = match kind {
        MapKind::Restriction => SubdiffKind::LimitingPlain,
        MapKind::Relative => SubdiffKind::LimitingRelative,
    };
    let mut running_sup = f64::NEG_INFINITY;
    let mut margin = f64::INFINITY;
    let mut seen = false;
    for t in param_grid(frame.length, grid) {
        let set = match subdiff_1d(&g, &omega, t, sk) {
            Ok(s) => s.set,
            Err(SubdiffError::NotInDomain(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let (Some(lo), Some(hi)) = (set.inf(), set.sup()) else { continue };
        if seen {
            margin = margin.min(lo.to_f64() - running_sup);
        }
        seen = true;
        running_sup = running_sup.max(hi.to_f64());
    }
    if !seen {
        return Ok(Trit { verdict: Verdict::Unknown, margin: f64::NAN });
    }
    if margin.is_nan() {
        margin = f64::NEG_INFINITY;
    }
    Ok(Trit::from_margin(margin, tol))
}

fn both(x: Trit, lip_ok: Option<bool>) -> Trit {
    match (x.verdict, lip_ok) {
        (Verdict::Out, _) | (_, Some(false)) => Trit { verdict: Verdict::Out, margin: x.margin },
        (Verdict::In, Some(true)) => x,
        _ => Trit { verdict: Verdict::Unknown, margin: x.margin },
    }
}

/// Equivalence of (i) convexity, (ii) monotonicity of `∂f_{[a,b]}`, (iii) (ii) with relative
/// Lipschitz continuity at interior points, and (iv) monotonicity of `∂_{[a,b]} f` with the
/// same Lipschitz property, for a function continuous relative to `[a, b]`. Also checks that
/// convexity forces finite moduli at interior points.
pub fn equivalence_report(f: &PiecewiseFunc, a: &[f64], b: &[f64]) -> Result<RuleReport, AnalysisError> {
    let frame = SegmentFrame::new(a, b)?;
    let (g, omega) = frame.reduce(f);
    let mut report = RuleReport::new("convexity_monotonicity_equivalence");
    report.tolerances.insert("margin".into(), OPT_TOL);
    let ts = param_grid(frame.length, EQUIVALENCE_GRID);

    let finite = ts.iter().all(|&t| g.value(&[t]).is_finite());
    let continuous = finite
        && ts.iter().all(|&t| {
            dini(&g, &omega, t)
                .map(|d| [d.left, d.right].iter().all(|s| !matches!(s, Side::JumpUp | Side::JumpDown)))
                .unwrap_or(false)
        });
    report.hypotheses.push(Hypothesis::new("finite on the segment", finite, None));
    report.hypotheses.push(Hypothesis::new("continuous relative to the segment", continuous, None));
    if !report.hypotheses_hold() {
        report.conclusion = Conclusion::Inconclusive;
        return Ok(report);
    }

    let interior: Vec<f64> = ts[1..ts.len() - 1].iter().step_by(4).copied().collect();
    let mut lip_ok = true;
    for &t in &interior {
        let est = lip_estimate(&g, &omega, &[t], &default_radii())?;
        if est.modulus().is_none() {
            lip_ok = false;
            report.witness("non-Lipschitz interior point", t);
            break;
        }
    }
    let convex = convexity_check(f, a, b, EQUIVALENCE_GRID, OPT_TOL)?;
    let plain = monotonicity_check(MapKind::Restriction, f, a, b, EQUIVALENCE_GRID, OPT_TOL)?;
    let relative = monotonicity_check(MapKind::Relative, f, a, b, EQUIVALENCE_GRID, OPT_TOL)?;
    let verdicts = [convex, plain, both(plain, Some(lip_ok)), both(relative, Some(lip_ok))];
    for (name, v) in ["convexity", "restriction monotone", "restriction monotone and Lipschitz", "relative monotone and Lipschitz"]
        .iter()
        .zip(&verdicts)
    {
        report.witness(name, format!("{:?} (margin {})", v.verdict, v.margin).to_lowercase());
    }
    report.witness("monotonicity form", "classical: sup F(u) <= inf F(v) for u < v");

    if verdicts.iter().any(|v| v.verdict == Verdict::Unknown) {
        report.conclusion = Conclusion::Inconclusive;
    } else if verdicts.iter().any(|v| v.verdict != verdicts[0].verdict) {
        report.conclusion = Conclusion::Fails;
        report.witness("counterexample", "verdicts disagree");
    }
    if convex.is_in() && !lip_ok {
        report.conclusion = Conclusion::Fails;
        report.witness("counterexample", "convex but not Lipschitz at an interior point");
    }
    report.witness("verdict", format!("{:?}", verdicts[0].verdict).to_lowercase());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::ExtReal;

    fn iv(s: &str) -> ClosedSet {
        ClosedSet::interval_1d(s.parse().unwrap()).unwrap()
    }

    fn func(src: &str) -> PiecewiseFunc {
        PiecewiseFunc::formula(1, src).unwrap()
    }

    fn e1() -> PiecewiseFunc {
        PiecewiseFunc::from_source(1, &[("x < 0", "-inf"), ("x = 0", "0")], "inf", &Default::default()).unwrap()
    }

    fn e3_first() -> PiecewiseFunc {
        PiecewiseFunc::from_source(1, &[("x > -1", "1/(x+1) - 1")], "inf", &Default::default()).unwrap()
    }

    fn e3_bad_second() -> PiecewiseFunc {
        PiecewiseFunc::from_source(1, &[("x < 0", "inf"), ("x = 0", "0")], "-inf", &Default::default()).unwrap()
    }

    #[test]
    fn fermat_examples() {
        let v = fermat_check(&e1(), &iv("[0, inf)"), 0.0, &[0.0, 0.1, 1.0]).unwrap();
        assert!(v.holds());
        let v = fermat_check(&func("-abs(x)"), &iv("(-inf, 0]"), 0.0, &[0.0]).unwrap();
        assert_eq!(v.verdict, Status::Violated);
        assert!(v.non_optimality_certificate);
        assert_eq!(v.witness["limiting"], "{1}");
        assert!(v.witness["gap: limiting"].parse::<f64>().unwrap() > 3.0 * OPT_TOL);
        let c = PiecewiseFunc::constant(1, ExtReal::from(2.0));
        assert!(fermat_check(&c, &iv("[-1, 3]"), 0.7, &[0.0, 1.0]).unwrap().holds());
    }

    #[test]
    fn sum_optimality_examples() {
        let c = iv("[-0.5, 0]");
        let v = sum_optimality_check(&e3_first(), &func("-abs(x)"), &c, 0.0).unwrap();
        assert!(v.holds(), "{v:?}");
        let v = sum_optimality_check(&func("exp(x) - 1"), &func("-abs(x)"), &iv("(-inf, 0]"), 0.0).unwrap();
        assert_eq!((v.verdict, v.witness["sum"].as_str()), (Status::Violated, "{2}"));
        let v = sum_optimality_check(&e3_first(), &e3_bad_second(), &c, 0.0).unwrap();
        assert_eq!(v.verdict, Status::Inconclusive);
        assert!(v.note.as_deref().unwrap().contains("at the point but not around"), "{:?}", v.note);
    }

    #[test]
    fn approx_examples() {
        let c = iv("[-0.5, 0]");
        let cert = approx_optimality_search(&e3_first(), &func("-abs(x)"), &c, 0.0, 0.01, 1e-6).unwrap();
        assert!(cert.gamma <= 1e-6 && cert.x1.abs() <= 0.01 && cert.x2.abs() <= 0.01);
        assert!((cert.s1 + 1.0).abs() < 0.1 && (cert.s2 - 1.0).abs() < 0.1, "{cert:?}");
        let cert = approx_optimality_search(&func("x^3/3"), &func("0"), &iv("[0, 1]"), 0.0, 0.01, 1e-6).unwrap();
        assert!(cert.s1.abs() < 1e-3 && (0.0..0.01).contains(&cert.x1));
        let z = func("0");
        let cert = approx_optimality_search(&z, &z, &iv("[0, 1]"), 0.5, 0.01, 1e-6).unwrap();
        assert_eq!((cert.gamma, cert.s1, cert.s2), (0.0, 0.0, 0.0));
    }

    #[test]
    fn scan_examples() {
        let xs = |v: Vec<LocalMin>| v.into_iter().map(|m| m.x).collect::<Vec<_>>();
        assert_eq!(xs(local_min_scan(&func("x^3/3"), &iv("[0, 1]"), 200).unwrap()), vec![0.0]);
        let sum = e3_first().sum(&func("-abs(x)")).unwrap();
        assert_eq!(xs(local_min_scan(&sum, &iv("[-0.5, 0]"), 200).unwrap()), vec![0.0]);
        assert_eq!(xs(local_min_scan(&func("-abs(x)"), &iv("[-1, 1]"), 200).unwrap()), vec![-1.0, 1.0]);
        let m = local_min_scan(&func("(x - 0.3)^2"), &iv("[-1, 1]"), 64).unwrap();
        assert_eq!(m.len(), 1);
        assert!((m[0].x - 0.3).abs() < 1e-7 && m[0].basin_radius.is_none());
        let m = local_min_scan(&func("x^2 - x^4/4"), &iv("[-2.5, 2.5]"), 100).unwrap();
        assert!(m.iter().any(|p| p.x.abs() < 1e-7 && p.basin_radius.is_some()));
        assert_eq!(xs(local_min_scan(&func("3"), &iv("[0, 1]"), 10).unwrap()), vec![0.0]);
    }

    #[test]
    fn mean_value_examples() {
        let w = mean_value_witness(&func("x^3/3"), &[0.0], &[1.0]).unwrap();
        assert!((w.c_param - 1.0 / 3f64.sqrt()).abs() < 1e-6);
        assert!((w.x_star_scalar - 1.0 / 3.0).abs() < 1e-6 && w.equality_case);
        assert!(w.residuals_ok(1e-6), "{w:?}");
        let ind = PiecewiseFunc::from_source(1, &[("0 <= x <= 1", "0")], "inf", &Default::default()).unwrap();
        let w = mean_value_witness(&ind, &[0.0], &[1.0]).unwrap();
        assert!(w.c_param < 1.0 && w.x_star_scalar >= -1e-9 && w.residuals_ok(1e-9));
        let w = mean_value_witness(&func("2*x"), &[0.0], &[1.0]).unwrap();
        assert!((w.x_star_scalar - 2.0).abs() < 1e-12 && w.residuals_ok(1e-9));
        let w = mean_value_witness(&func("abs(x)"), &[-1.0], &[2.0]).unwrap();
        assert!(w.residuals_ok(1e-9), "{w:?}");
        assert!(w.csv().starts_with("t,f,phi\n0,1,"));
        assert!(matches!(mean_value_witness(&e1(), &[-1.0], &[1.0]), Err(AnalysisError::InfiniteEndpoint(_))));
    }

    #[test]
    fn convexity_examples() {
        assert!(convexity_check(&func("x^3/3"), &[0.0], &[1.0], 32, 1e-9).unwrap().is_in());
        let t = convexity_check(&func("-x^2"), &[-1.0], &[1.0], 32, 1e-9).unwrap();
        assert!(t.is_out() && (t.margin + 1.0).abs() < 1e-12);
        assert!(convexity_check(&func("3*x - 1"), &[-2.0], &[5.0], 32, 1e-9).unwrap().is_in());
    }

    #[test]
    fn monotonicity_examples() {
        for kind in [MapKind::Relative, MapKind::Restriction] {
            assert!(monotonicity_check(kind, &func("x^3/3"), &[0.0], &[1.0], 32, 1e-9).unwrap().is_in());
            assert!(monotonicity_check(kind, &func("-x^2"), &[-1.0], &[1.0], 32, 1e-9).unwrap().is_out());
            assert!(monotonicity_check(kind, &func("4"), &[-1.0], &[1.0], 32, 1e-9).unwrap().is_in());
        }
    }

    #[test]
    fn equivalence_examples() {
        for (src, a, b, verdict) in [("x^3/3", 0.0, 1.0, "in"), ("-x^2", -1.0, 1.0, "out"), ("abs(x)", -1.0, 1.0, "in")] {
            let r = equivalence_report(&func(src), &[a], &[b]).unwrap();
            assert_eq!(r.conclusion, Conclusion::Holds, "{src}: {r:?}");
            assert_eq!(r.witnesses["verdict"], verdict);
        }
    }
}
