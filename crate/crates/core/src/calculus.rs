//! Verifiers for calculus rules of relative subdifferentials on the line: scaling, the
//! subgradient norm bound under relative Lipschitz continuity, the inclusion chain between
//! the three subdifferentials, and the exact and fuzzy sum rules.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::funcdsl::lip::{default_radii, lip_estimate, lsc_around};
use crate::funcdsl::{FuncError, PiecewiseFunc};
use crate::interval::{Interval, IntervalSet};
use crate::sets::ClosedSet;
use crate::subdiff::{dini, eps_regular_relative, limiting_plain, limiting_relative, Side, SubdiffError};

/// Containment slack for comparing exactly computed sets.
pub const SET_TOL: f64 = 1e-9;
/// Radius of the neighbourhood in which hypotheses are verified.
pub const HYPOTHESIS_RADIUS: f64 = 0.1;
/// Tolerance of the sampled relative lower semicontinuity test.
pub const LSC_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalculusError {
    #[error(transparent)]
    Subdiff(#[from] SubdiffError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error("scale factor must be positive, got {0}")]
    BadScale(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: Option<String>,
}

impl Hypothesis {
    pub(crate) fn new(name: &str, holds: bool, detail: Option<String>) -> Hypothesis {
        Hypothesis { name: name.to_string(), holds, detail }
    }
}

/// Outcome of a rule check. `Fails` always comes with a counterexample among the witnesses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleReport {
    pub rule: String,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Conclusion,
    pub witnesses: BTreeMap<String, String>,
    pub tolerances: BTreeMap<String, f64>,
}

impl RuleReport {
    pub(crate) fn new(rule: &str) -> RuleReport {
        RuleReport {
            rule: rule.to_string(),
            hypotheses: Vec::new(),
            conclusion: Conclusion::Holds,
            witnesses: BTreeMap::new(),
            tolerances: BTreeMap::from([("set".to_string(), SET_TOL)]),
        }
    }

    pub(crate) fn witness(&mut self, key: &str, value: impl ToString) {
        self.witnesses.insert(key.to_string(), value.to_string());
    }

    /// Records a required inclusion; a failure is stored with both sets.
    fn require_subset(&mut self, label: &str, small: &IntervalSet, big: &IntervalSet) {
        if !small.is_subset_tol(big, SET_TOL) {
            self.conclusion = Conclusion::Fails;
            self.witness(&format!("counterexample: {label}"), format!("{small} not within {big}"));
        }
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }
}

fn scaled(s: &IntervalSet, lambda: f64) -> IntervalSet {
    s.affine(lambda, 0.0).expect("positive scale")
}

/// Scaling rules: `λ∂̂^{ε/max(λ,1)} f ⊆ ∂̂^ε(λf) ⊆ λ∂̂^{ε·max(1/λ,1)} f`, and for `ε = 0` the
/// equalities `∂̂(λf) = λ∂̂f` and `∂(λf) = λ∂f`, all relative to `Ω`.
pub fn scalar_rule_check(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64, lambda: f64, eps: f64) -> Result<RuleReport, CalculusError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(CalculusError::BadScale(lambda));
    }
    let lf = f.scale(lambda)?;
    let eps_hat = eps / lambda.max(1.0);
    let eps_tilde = eps * (1.0 / lambda).max(1.0);
    let inner = scaled(&eps_regular_relative(f, omega, xbar, eps_hat)?.set, lambda);
    let middle = eps_regular_relative(&lf, omega, xbar, eps)?.set;
    let outer = scaled(&eps_regular_relative(f, omega, xbar, eps_tilde)?.set, lambda);
    let mut report = RuleReport::new("scalar_multiplication");
    report.witness("lambda", lambda);
    report.witness("eps", eps);
    report.witness("inner", &inner);
    report.witness("middle", &middle);
    report.witness("outer", &outer);
    report.require_subset("inner in middle", &inner, &middle);
    report.require_subset("middle in outer", &middle, &outer);
    if eps == 0.0 {
        // regular sets: inner, middle and outer coincide as sets already computed
        report.require_subset("regular equality", &middle, &inner);
        let lim_scaled = limiting_relative(&lf, omega, xbar)?.set;
        let lim = scaled(&limiting_relative(f, omega, xbar)?.set, lambda);
        report.witness("limiting of scaled", &lim_scaled);
        report.witness("scaled limiting", &lim);
        report.require_subset("limiting equality (left)", &lim_scaled, &lim);
        report.require_subset("limiting equality (right)", &lim, &lim_scaled);
    }
    Ok(report)
}

/// Relative Lipschitz modulus on `Ω ∩ [x̄ − radius, x̄ + radius]` for a continuous piecewise
/// smooth function: the largest one-sided rate at the sample points, or `None` when a jump
/// or an infinite rate is found.
pub fn local_modulus(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64, radius: f64) -> Result<Option<f64>, CalculusError> {
    let mut ell = 0.0f64;
    for x in ball_points(f, omega, xbar, radius, 64) {
        let d = dini(f, omega, x)?;
        for side in [d.right, d.left] {
            match side {
                Side::Inaccessible => {}
                Side::Continuous { rate } if rate.is_finite() => ell = ell.max(rate.abs()),
                _ => return Ok(None),
            }
        }
    }
    Ok(Some(ell))
}

/// Grid points of `Ω ∩ dom f` in the ball, plus breakpoints and the ends of `Ω` inside it.
pub fn ball_points(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64, radius: f64, half: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=2 * half).map(|k| xbar + radius * (k as f64 / half as f64 - 1.0)).collect();
    pts.extend(f.breakpoints_1d(xbar - radius, xbar + radius));
    for p in omega.line_preimage(&[0.0], &[1.0]).parts() {
        pts.extend([p.lo_f64(), p.hi_f64()].into_iter().filter(|e| (e - xbar).abs() <= radius));
    }
    let g = f.restrict(omega);
    pts.retain(|x| omega.contains(&[*x], 0.0) && g.value(&[*x]).is_finite());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Norm bound `|s| ≤ ℓ + ε(1 + ℓ)` for every `s ∈ ∂̂^ε_Ω f(x)` at sample points `x` near `x̄`,
/// with `ℓ` the relative Lipschitz modulus on the neighbourhood.
pub fn lipschitz_bound_check(
    f: &PiecewiseFunc,
    omega: &ClosedSet,
    xbar: f64,
    eps: f64,
    radius: f64,
    tol: f64,
) -> Result<RuleReport, CalculusError> {
    let mut report = RuleReport::new("lipschitz_norm_bound");
    report.tolerances.insert("bound".into(), tol);
    let lip = lip_estimate(f, omega, &[xbar], &default_radii()).map_err(|e| CalculusError::Precondition(e.to_string()))?;
    let ell = if lip.modulus().is_some() { local_modulus(f, omega, xbar, radius)? } else { None };
    report.hypotheses.push(Hypothesis::new(
        "relatively Lipschitz near the point",
        ell.is_some(),
        Some(format!("sampled modulus at the point {}", lip.value)),
    ));
    let Some(ell) = ell else {
        report.conclusion = Conclusion::Inconclusive;
        return Ok(report);
    };
    let bound = ell + eps * (1.0 + ell);
    let mut worst = 0.0f64;
    for x in ball_points(f, omega, xbar, radius, 32) {
        let s = eps_regular_relative(f, omega, x, eps)?.set;
        let size = match (s.inf(), s.sup()) {
            (Some(lo), Some(hi)) => lo.to_f64().abs().max(hi.to_f64().abs()),
            _ => 0.0,
        };
        worst = worst.max(size);
        if size > bound + tol {
            report.conclusion = Conclusion::Fails;
            report.witness("counterexample", format!("x = {x}: {s} exceeds {bound}"));
        }
    }
    report.witness("modulus", ell);
    report.witness("bound", bound);
    report.witness("largest subgradient", worst);
    report.witness("ratio", if bound > 0.0 { worst / bound } else { 0.0 });
    Ok(report)
}

/// `∂̂_Ω f(x̄) ⊆ ∂_Ω f(x̄) ⊆ ∂f_Ω(x̄)`.
pub fn inclusion_chain_check(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64) -> Result<RuleReport, CalculusError> {
    let regular = eps_regular_relative(f, omega, xbar, 0.0)?.set;
    let relative = limiting_relative(f, omega, xbar)?.set;
    let plain = limiting_plain(f, omega, xbar)?.set;
    let mut report = RuleReport::new("inclusion_chain");
    report.witness("regular relative", &regular);
    report.witness("limiting relative", &relative);
    report.witness("limiting of restriction", &plain);
    report.require_subset("regular in limiting", &regular, &relative);
    report.require_subset("limiting in restriction", &relative, &plain);
    Ok(report)
}

/// Whether `f` is relatively Lipschitz near `x̄` (sampled modulus finite and stable).
pub fn lipschitz_hypothesis(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64) -> Hypothesis {
    match lip_estimate(f, omega, &[xbar], &default_radii()) {
        Ok(l) => Hypothesis::new(
            "relatively Lipschitz near the point",
            l.modulus().is_some(),
            Some(format!("sampled modulus {}", l.value)),
        ),
        Err(e) => Hypothesis::new("relatively Lipschitz near the point", false, Some(e.to_string())),
    }
}

/// Whether `f` is relatively lsc at every point of `Ω` near `x̄`.
pub fn lsc_hypothesis(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64) -> Hypothesis {
    let name = "relatively lsc around the point";
    match lsc_around(f, omega, &[xbar], HYPOTHESIS_RADIUS, LSC_TOL) {
        Ok(l) if l.around => Hypothesis::new(name, true, None),
        Ok(l) => {
            let at = if l.at_point.is_in() { "lsc relative to the set at the point but not around it" } else { "not lsc at the point" };
            let mut detail = at.to_string();
            if let Some(w) = l.witness {
                detail.push_str(&format!("; fails at {w:?}"));
            }
            if let Some(r) = l.reason {
                detail.push_str(&format!(" ({r})"));
            }
            Hypothesis::new(name, false, Some(detail))
        }
        Err(e) => Hypothesis::new(name, false, Some(e.to_string())),
    }
}

pub fn convex_hypothesis(omega: &ClosedSet) -> Hypothesis {
    Hypothesis::new("set is convex", omega.is_convex_variant(), None)
}

/// `∂_Ω(f₁ + f₂)(x̄) ⊆ ∂_Ω f₁(x̄) + ∂_Ω f₂(x̄)` under its hypotheses.
pub fn sum_rule_check(f1: &PiecewiseFunc, f2: &PiecewiseFunc, omega: &ClosedSet, xbar: f64) -> Result<RuleReport, CalculusError> {
    let mut report = RuleReport::new("sum_rule");
    report.hypotheses = vec![convex_hypothesis(omega), lipschitz_hypothesis(f1, omega, xbar), lsc_hypothesis(f2, omega, xbar)];
    let sum = f1.sum(f2)?;
    let lhs = limiting_relative(&sum, omega, xbar)?.set;
    let s1 = limiting_relative(f1, omega, xbar)?.set;
    let s2 = limiting_relative(f2, omega, xbar)?.set;
    let rhs = s1.minkowski_sum(&s2);
    report.witness("sum", &lhs);
    report.witness("first", &s1);
    report.witness("second", &s2);
    report.witness("minkowski", &rhs);
    if !report.hypotheses_hold() {
        report.conclusion = Conclusion::Inconclusive;
        return Ok(report);
    }
    report.require_subset("sum in minkowski", &lhs, &rhs);
    Ok(report)
}

/// A numerical witness for an approximate sum rule or optimality condition:
/// `x* ≈ s₁ + s₂` with `sᵢ ∈ ∂̂^{ηᵢ}_Ω fᵢ(xᵢ)`, up to the residual `gamma`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzyCertificate {
    pub eta: f64,
    pub x1: f64,
    pub x2: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub s1: f64,
    pub s2: f64,
    pub target: f64,
    /// `|x* − s₁ − s₂|`.
    pub gamma: f64,
    pub set1: IntervalSet,
    pub set2: IntervalSet,
}

/// `s₁ ∈ A`, `s₂ ∈ B` minimizing `|t − s₁ − s₂|`, with `s₁` of smallest magnitude among the
/// optimal splits. `None` if either set is empty.
pub fn best_split(a: &IntervalSet, b: &IntervalSet, t: f64) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    for p in a.parts() {
        for q in b.parts() {
            let sum = Interval::new(p.lo_f64() + q.lo_f64(), p.hi_f64() + q.hi_f64(), true, true)?;
            let target = t.clamp(sum.lo_f64(), sum.hi_f64());
            // s₁ ∈ p ∩ (target − q), a nonempty interval; take its element nearest 0
            let lo = p.lo_f64().max(target - q.hi_f64());
            let hi = p.hi_f64().min(target - q.lo_f64());
            let s1 = 0.0f64.clamp(lo, hi.max(lo));
            let s2 = target - s1;
            let gap = (t - target).abs();
            if best.is_none_or(|(g, _, _)| gap < g) {
                best = Some((gap, s1, s2));
            }
        }
    }
    best.map(|(_, s1, s2)| (s1, s2))
}

/// Candidate points for a fuzzy search: a grid on `B(x̄, η) ∩ Ω` with `|f(x) − f(x̄)| ≤ η`.
fn proximal_points(f: &PiecewiseFunc, omega: &ClosedSet, xbar: f64, eta: f64) -> Vec<f64> {
    let g = f.restrict(omega);
    let fbar = g.value(&[xbar]);
    let mut pts = ball_points(f, omega, xbar, eta, 16);
    pts.retain(|x| (g.value(&[*x]) - fbar).abs() <= eta);
    pts
}

/// Searches `(x₁, x₂, η̃)` over grids, minimizing `|x* − s₁ − s₂|` for
/// `sᵢ ∈ ∂̂^{η̃}_Ω fᵢ(xᵢ)`; ties prefer a smaller `η̃`, then points closer to `x̄`.
pub(crate) fn grid_split_search(
    f1: &PiecewiseFunc,
    f2: &PiecewiseFunc,
    omega: &ClosedSet,
    xbar: f64,
    target: f64,
    eta: f64,
    eps_grid: &[f64],
) -> Result<Option<FuzzyCertificate>, CalculusError> {
    let p1 = proximal_points(f1, omega, xbar, eta);
    let p2 = proximal_points(f2, omega, xbar, eta);
    let mut best: Option<((f64, f64, f64, f64, f64), FuzzyCertificate)> = None;
    for &e in eps_grid {
        let sets = |f: &PiecewiseFunc, pts: &[f64]| -> Result<Vec<IntervalSet>, CalculusError> {
            pts.iter().map(|&x| Ok(eps_regular_relative(f, omega, x, e)?.set)).collect()
        };
        let (s1, s2) = (sets(f1, &p1)?, sets(f2, &p2)?);
        for (i, a) in s1.iter().enumerate() {
            for (j, b) in s2.iter().enumerate() {
                let Some((u, v)) = best_split(a, b, target) else { continue };
                let gamma = (target - u - v).abs();
                let key = (gamma, e, (p1[i] - xbar).abs().max((p2[j] - xbar).abs()), p1[i], p2[j]);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    let cert = FuzzyCertificate {
                        eta,
                        x1: p1[i],
                        x2: p2[j],
                        eta1: e,
                        eta2: e,
                        s1: u,
                        s2: v,
                        target,
                        gamma,
                        set1: a.clone(),
                        set2: b.clone(),
                    };
                    best = Some((key, cert));
                }
            }
        }
    }
    Ok(best.map(|(_, c)| c))
}

/// Fuzzy sum rule: for `x* ∈ ∂̂^ε_Ω(f₁ + f₂)(x̄)` and `η > ε`, finds `xᵢ` near `x̄` and
/// `sᵢ ∈ ∂̂^{ηᵢ}_Ω fᵢ(xᵢ)`, `ηᵢ ≤ η`, with `x*` close to `s₁ + s₂`.
pub fn fuzzy_sum_search(
    f1: &PiecewiseFunc,
    f2: &PiecewiseFunc,
    omega: &ClosedSet,
    xbar: f64,
    xstar: f64,
    eps: f64,
    eta: f64,
) -> Result<Option<FuzzyCertificate>, CalculusError> {
    if !(eta > eps) {
        return Err(CalculusError::Precondition(format!("eta = {eta} must exceed eps = {eps}")));
    }
    let sum = f1.sum(f2)?;
    let own = eps_regular_relative(&sum, omega, xbar, eps)?.set;
    if !own.contains(xstar) {
        return Err(CalculusError::Precondition(format!("{xstar} is not in the subdifferential {own} of the sum")));
    }
    let eps_grid: Vec<f64> = (0..5).map(|j| eta * 0.5f64.powi(4 - j)).collect();
    grid_split_search(f1, f2, omega, xbar, xstar, eta, &eps_grid)
}

/// Fuzzy search along `η = η₀·2^{-j}`, `j < steps`.
pub fn fuzzy_sum_sweep(
    f1: &PiecewiseFunc,
    f2: &PiecewiseFunc,
    omega: &ClosedSet,
    xbar: f64,
    xstar: f64,
    eps: f64,
    eta0: f64,
    steps: usize,
) -> Result<Vec<Option<FuzzyCertificate>>, CalculusError> {
    (0..steps).map(|j| fuzzy_sum_search(f1, f2, omega, xbar, xstar, eps, eta0 * 0.5f64.powi(j as i32))).collect()
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
    fn scalar_examples() {
        let r = scalar_rule_check(&func("x^3/3"), &iv("[0, 1]"), 0.5, 1.0, 0.1).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds);
        assert!(r.witnesses["inner"] == r.witnesses["middle"] && r.witnesses["middle"] == r.witnesses["outer"]);
        let r = scalar_rule_check(&func("-abs(x)"), &iv("(-inf, 0]"), 0.0, 2.0, 0.0).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds);
        assert_eq!(r.witnesses["limiting of scaled"], "{2}");
        let r = scalar_rule_check(&e1(), &iv("[0, inf)"), 0.0, 3.0, 0.3).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds);
        assert_eq!(r.witnesses["middle"], "[0, inf)");
        assert!(scalar_rule_check(&e1(), &iv("[0, inf)"), 0.0, 0.0, 0.3).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        let r = lipschitz_bound_check(&func("-abs(x)"), &iv("(-inf, 0]"), -0.5, 0.0, 0.25, 1e-6).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds);
        assert_eq!((r.witnesses["bound"].as_str(), r.witnesses["largest subgradient"].as_str()), ("1", "1"));
        let r = lipschitz_bound_check(&func("x^3/3"), &iv("[0, 1]"), 0.5, 0.1, 0.5, 1e-6).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds);
        assert!((r.witnesses["bound"].parse::<f64>().unwrap() - 1.2).abs() < 1e-12);
        let r = lipschitz_bound_check(&func("3"), &iv("[0, 1]"), 0.5, 0.0, 0.25, 1e-6).unwrap();
        assert_eq!(r.witnesses["largest subgradient"], "0");
        let r = lipschitz_bound_check(&e1(), &iv("[0, inf)"), 0.0, 0.0, 0.25, 1e-6).unwrap();
        assert_eq!(r.conclusion, Conclusion::Inconclusive);
    }

    #[test]
    fn chain_examples() {
        let r = inclusion_chain_check(&func("x^3/3"), &iv("[0, 1]"), 0.0).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds);
        assert_eq!(r.witnesses["limiting of restriction"], "(-inf, 0]");
        let r = inclusion_chain_check(&func("-abs(x)"), &iv("(-inf, 0]"), 0.0).unwrap();
        assert_eq!(
            (r.witnesses["regular relative"].as_str(), r.witnesses["limiting relative"].as_str()),
            ("empty", "{1}")
        );
        let r = inclusion_chain_check(&e1(), &iv("[0, inf)"), 0.0).unwrap();
        assert_eq!(r.witnesses["limiting of restriction"], "(-inf, inf)");
        assert_eq!(r.conclusion, Conclusion::Holds);
    }

    #[test]
    fn sum_rule_examples() {
        let r = sum_rule_check(&func("exp(x) - 1"), &func("-abs(x)"), &iv("(-inf, 0]"), 0.0).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds);
        assert_eq!(r.witnesses["minkowski"], "{2}");
        let r = sum_rule_check(&func("x^3/3"), &func("-abs(x)"), &iv("[0, 1]"), 0.5).unwrap();
        assert_eq!((r.conclusion, r.witnesses["sum"].as_str()), (Conclusion::Holds, "{-0.75}"));
        let r = sum_rule_check(&func("x^2"), &func("0"), &iv("[-1, 1]"), 0.5).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds);
    }

    #[test]
    fn splits() {
        let a: IntervalSet = "[-1, 0]".parse().unwrap();
        let b: IntervalSet = "{1}".parse().unwrap();
        assert_eq!(best_split(&a, &b, 0.0), Some((-1.0, 1.0)));
        let c: IntervalSet = "(-inf, 0] u [2, 3]".parse().unwrap();
        assert_eq!(best_split(&c, &b, 3.5), Some((2.5, 1.0)));
        assert_eq!(best_split(&IntervalSet::empty(), &b, 0.0), None);
    }

    #[test]
    fn fuzzy_examples() {
        let cube = func("x^3/3");
        let c = fuzzy_sum_search(&cube, &func("0"), &iv("[0, 1]"), 0.5, 0.25, 0.0, 0.1).unwrap().unwrap();
        assert!(c.gamma < 1e-12 && c.x1 == 0.5 && c.x2 == 0.5);
        let e = fuzzy_sum_search(&func("exp(x) - 1"), &func("-abs(x)"), &iv("(-inf, 0]"), 0.0, 0.0, 0.0, 0.1);
        assert!(matches!(e, Err(CalculusError::Precondition(_))));
        let m = func("-abs(x)");
        let c = fuzzy_sum_search(&m, &m, &iv("(-inf, 0]"), -0.3, 2.0, 0.0, 0.1).unwrap().unwrap();
        assert!(c.gamma < 1e-12);
        assert!(c.eta1 <= c.eta && c.set1.contains(c.s1) && c.set2.contains(c.s2), "{c:?}");
        assert!((c.s1 - 1.0).abs() <= 2.0 * c.eta1 && (c.s2 - 1.0).abs() <= 2.0 * c.eta2);
    }
}
