//! Executes validated queries and assembles the machine-readable report.

use rayon::prelude::*;
use relsub::analysis::{
    approx_optimality_search, convexity_check, equivalence_report, fermat_check, local_min_scan, mean_value_witness,
    monotonicity_check, sum_optimality_check, AnalysisError, MapKind, OptimalityVerdict, Status as OptStatus,
};
use relsub::calculus::{
    fuzzy_sum_search, inclusion_chain_check, lipschitz_bound_check, scalar_rule_check, sum_rule_check, CalculusError, Conclusion,
    RuleReport,
};
use relsub::estimator::{limiting_estimate, reconstruct_1d, EstimatorError, Schedule, RECONSTRUCT_TOL};
use relsub::interval::IntervalSet;
use relsub::subdiff::{subdiff_1d, SubdiffError, SubdiffKind};
use relsub::verdict::{Trit, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

use crate::problem::{op_name, Kind, Op, Problem, Query};

/// Gap allowed between an estimated set and an asserted one.
pub const ESTIMATE_TOL: f64 = 1e-3;
/// Gap allowed between an estimated set and the exact one in oracle comparisons.
pub const ORACLE_GAP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryStatus {
    Ok,
    Inconclusive,
    Failed,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub stated: String,
    pub computed: String,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueryReport {
    pub id: String,
    pub op: String,
    pub inputs: Value,
    pub status: QueryStatus,
    pub outcome: String,
    pub result: Value,
    pub provenance: Value,
    pub discrepancies: Vec<Discrepancy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Files to write next to the report when CSV output is requested.
    #[serde(skip)]
    pub csv: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub ok: usize,
    pub inconclusive: usize,
    pub failed: usize,
    pub error: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub seed: u64,
    pub queries: Vec<QueryReport>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// `0` when every query is conclusive and every assertion holds, `1` on a failed rule or
/// assertion, `2` when results are inconclusive, `3` on input errors.
pub fn exit_code(statuses: impl IntoIterator<Item = QueryStatus>) -> i32 {
    match statuses.into_iter().max() {
        None | Some(QueryStatus::Ok) => 0,
        Some(QueryStatus::Inconclusive) => 2,
        Some(QueryStatus::Failed) => 1,
        Some(QueryStatus::Error) => 3,
    }
}

/// JSON number, or a string for non-finite values.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn trit_json(t: Trit) -> Value {
    json!({ "verdict": verdict_word(t.verdict), "margin": num(t.margin) })
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::In => "in",
        Verdict::Out => "out",
        Verdict::Unknown => "unknown",
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

/// Failure inside an operation: bad input, or a negative mathematical outcome.
enum RunError {
    Input(String),
    Failed(String),
}

impl From<SubdiffError> for RunError {
    fn from(e: SubdiffError) -> Self {
        RunError::Input(e.to_string())
    }
}

impl From<CalculusError> for RunError {
    fn from(e: CalculusError) -> Self {
        RunError::Input(e.to_string())
    }
}

impl From<EstimatorError> for RunError {
    fn from(e: EstimatorError) -> Self {
        RunError::Input(e.to_string())
    }
}

impl From<AnalysisError> for RunError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::NoCertificate { .. } | AnalysisError::EmptySubdifferential(_) => RunError::Failed(e.to_string()),
            other => RunError::Input(other.to_string()),
        }
    }
}

/// What an operation produced before expectations are applied.
struct Outcome {
    natural: QueryStatus,
    word: String,
    result: Value,
    set: Option<(IntervalSet, f64)>,
    estimated: bool,
    csv: Vec<(String, String)>,
}

impl Outcome {
    fn new(natural: QueryStatus, word: impl Into<String>, result: Value) -> Outcome {
        Outcome { natural, word: word.into(), result, set: None, estimated: false, csv: Vec::new() }
    }
}

fn rule_outcome(r: RuleReport) -> Outcome {
    let (status, word) = match r.conclusion {
        Conclusion::Holds => (QueryStatus::Ok, "holds"),
        Conclusion::Fails => (QueryStatus::Failed, "fails"),
        Conclusion::Inconclusive => (QueryStatus::Inconclusive, "inconclusive"),
    };
    Outcome::new(status, word, to_json(&r))
}

fn optimality_outcome(v: OptimalityVerdict) -> Outcome {
    let (status, word) = match v.verdict {
        OptStatus::NecessaryConditionHolds => (QueryStatus::Ok, "holds"),
        OptStatus::Violated => (QueryStatus::Failed, "violated"),
        OptStatus::Inconclusive => (QueryStatus::Inconclusive, "inconclusive"),
    };
    Outcome::new(status, word, to_json(&v))
}

fn trit_outcome(t: Trit) -> Outcome {
    let status = if t.verdict == Verdict::Unknown { QueryStatus::Inconclusive } else { QueryStatus::Ok };
    Outcome::new(status, verdict_word(t.verdict), trit_json(t))
}

fn subdiff_kind(q: &Query) -> SubdiffKind {
    match q.kind.unwrap_or(Kind::EpsRegular) {
        Kind::EpsRegular => SubdiffKind::EpsRegular { eps: q.eps.unwrap_or(0.0) },
        Kind::Limiting => SubdiffKind::LimitingRelative,
        Kind::LimitingPlain => SubdiffKind::LimitingPlain,
    }
}

/// The schedule a query runs with: its own, or the default with the file seed.
pub fn schedule_for(q: &Query, seed: u64) -> Schedule {
    q.schedule.clone().unwrap_or_else(|| Schedule { seed, ..Schedule::default() })
}

fn execute(p: &Problem, q: &Query, seed: u64) -> Result<Outcome, RunError> {
    let op = q.op.expect("validated");
    let f = || &p.funcs[q.func.as_ref().expect("validated")];
    let f2 = || &p.funcs[q.fn2.as_ref().expect("validated")];
    let omega = || &p.sets[q.set.as_ref().expect("validated")];
    let x = || q.point.as_ref().expect("validated")[0];
    let (a, b) = (|| q.a.clone().expect("validated"), || q.b.clone().expect("validated"));
    let tol = q.tol;
    Ok(match op {
        Op::Subdiff => {
            let s = subdiff_1d(f(), omega(), x(), subdiff_kind(q))?;
            let mut o = Outcome::new(QueryStatus::Ok, s.set.to_string(), to_json(&s));
            o.set = Some((s.set, 0.0));
            o
        }
        Op::Estimate => {
            let sched = schedule_for(q, seed);
            let tol = tol.unwrap_or(ESTIMATE_TOL);
            let (set, result, csv) = match q.kind.unwrap_or(Kind::EpsRegular) {
                Kind::EpsRegular => {
                    let r = reconstruct_1d(f(), omega(), x(), q.eps.unwrap_or(0.0), None, &sched, RECONSTRUCT_TOL)?;
                    let csv = r.csv();
                    (r.result.set.clone(), to_json(&r), Some(csv))
                }
                Kind::Limiting => {
                    let r = limiting_estimate(f(), omega(), x(), &sched)?;
                    (r.result.set.clone(), to_json(&r), None)
                }
                Kind::LimitingPlain => return Err(RunError::Input("the estimator supports eps_regular and limiting".into())),
            };
            let mut o = Outcome::new(QueryStatus::Ok, set.to_string(), result);
            o.set = Some((set, tol));
            o.estimated = true;
            o.csv = csv.into_iter().map(|c| ("candidates".to_string(), c)).collect();
            o
        }
        Op::InclusionChain => rule_outcome(inclusion_chain_check(f(), omega(), x())?),
        Op::ScalarRule => rule_outcome(scalar_rule_check(f(), omega(), x(), q.lambda.expect("validated"), q.eps.unwrap_or(0.0))?),
        Op::LipschitzBound => rule_outcome(lipschitz_bound_check(
            f(),
            omega(),
            x(),
            q.eps.unwrap_or(0.0),
            q.radius.unwrap_or(0.25),
            tol.unwrap_or(1e-6),
        )?),
        Op::SumRule => rule_outcome(sum_rule_check(f(), f2(), omega(), x())?),
        Op::FuzzySum => {
            let eps = q.eps.unwrap_or(0.0);
            match fuzzy_sum_search(f(), f2(), omega(), x(), q.xstar.expect("validated"), eps, q.eta.expect("validated"))? {
                Some(c) => Outcome::new(QueryStatus::Ok, "certificate", to_json(&c)),
                None => Outcome::new(QueryStatus::Failed, "no certificate", Value::Null),
            }
        }
        Op::Fermat => {
            let eps = q.eps_list.clone().unwrap_or_else(|| vec![0.0, 0.1, 1.0]);
            optimality_outcome(fermat_check(f(), omega(), x(), &eps)?)
        }
        Op::SumOptimality => optimality_outcome(sum_optimality_check(f(), f2(), omega(), x())?),
        Op::ApproxOptimality => {
            let c = approx_optimality_search(f(), f2(), omega(), x(), q.eta.expect("validated"), tol.unwrap_or(1e-6))?;
            Outcome::new(QueryStatus::Ok, "certificate", to_json(&c))
        }
        Op::LocalMin => {
            let mins = local_min_scan(f(), omega(), q.grid.unwrap_or(400))?;
            let word = mins.iter().map(|m| m.x.to_string()).collect::<Vec<_>>().join(", ");
            Outcome::new(QueryStatus::Ok, word, to_json(&mins))
        }
        Op::MeanValue => {
            let w = mean_value_witness(f(), &a(), &b())?;
            let tol = tol.unwrap_or(1e-6);
            let status = if w.residuals_ok(tol) { QueryStatus::Ok } else { QueryStatus::Failed };
            let word = if w.equality_case { "equality case" } else { "inequality case" };
            let mut o = Outcome::new(status, word, to_json(&w));
            o.csv = vec![("trace".to_string(), w.csv())];
            o
        }
        Op::Convexity => trit_outcome(convexity_check(f(), &a(), &b(), q.grid.unwrap_or(64), tol.unwrap_or(1e-9))?),
        Op::Monotonicity => {
            let kind = match q.kind {
                Some(Kind::LimitingPlain) => MapKind::Restriction,
                _ => MapKind::Relative,
            };
            trit_outcome(monotonicity_check(kind, f(), &a(), &b(), q.grid.unwrap_or(64), tol.unwrap_or(1e-9))?)
        }
        Op::Equivalence => rule_outcome(equivalence_report(f(), &a(), &b())?),
    })
}

/// Runs one query; never panics on bad input.
pub fn run_query(p: &Problem, q: &Query, index: usize, seed: u64) -> QueryReport {
    let id = q.id.clone().unwrap_or_else(|| format!("q{index}"));
    let op = q.op.map(op_name).unwrap_or_default();
    let inputs = to_json(q);
    let mut report = QueryReport {
        id,
        op,
        inputs,
        status: QueryStatus::Error,
        outcome: String::new(),
        result: Value::Null,
        provenance: json!({ "mode": "exact" }),
        discrepancies: Vec::new(),
        error: None,
        csv: Vec::new(),
    };
    if let Err(msg) = p.validate_query(q) {
        report.error = Some(format!("{}: {msg}", q.label(index)));
        return report;
    }
    match execute(p, q, seed) {
        Err(RunError::Input(msg)) => report.error = Some(msg),
        Err(RunError::Failed(msg)) => {
            report.status = QueryStatus::Failed;
            report.outcome = "failed".into();
            report.error = Some(msg);
        }
        Ok(o) => {
            if o.estimated {
                let sched = schedule_for(q, seed);
                report.provenance = json!({ "mode": "estimated", "schedule": to_json(&sched), "seed": sched.seed });
            }
            report.status = match (&q.expect, &o.set) {
                (None, _) => o.natural,
                (Some(want), Some((got, tol))) => {
                    let want: IntervalSet = want.parse().expect("validated");
                    if sets_match(&want, got, *tol) { QueryStatus::Ok } else { QueryStatus::Failed }
                }
                (Some(want), None) => {
                    if *want == o.word { QueryStatus::Ok } else { QueryStatus::Failed }
                }
            };
            if let (Some(stated), Some((got, tol))) = (&q.stated, &o.set) {
                let stated_set: IntervalSet = stated.parse().expect("validated");
                if !sets_match(&stated_set, got, *tol) {
                    report.discrepancies.push(Discrepancy {
                        stated: stated_set.to_string(),
                        computed: got.to_string(),
                        note: "computed from the definition of the relative subdifferential; differs from the stated value".into(),
                    });
                }
            }
            report.outcome = o.word;
            report.result = o.result;
            report.csv = o.csv;
        }
    }
    report
}

/// Equality for exact sets, Hausdorff closeness plus matching unboundedness otherwise.
pub fn sets_match(want: &IntervalSet, got: &IntervalSet, tol: f64) -> bool {
    if tol == 0.0 {
        return want == got;
    }
    want.is_empty() == got.is_empty()
        && want.left_unbounded() == got.left_unbounded()
        && want.right_unbounded() == got.right_unbounded()
        && want.hausdorff_bounded(got, 1e6) <= tol
}

/// Number of worker threads: `RELSUB_THREADS` if set to a positive integer, else rayon's default.
pub fn thread_count() -> Option<usize> {
    std::env::var("RELSUB_THREADS").ok()?.trim().parse().ok().filter(|n: &usize| *n > 0)
}

/// Runs `work` on a pool capped by `RELSUB_THREADS`.
fn in_pool<T: Send>(work: impl FnOnce() -> T + Send) -> T {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// Runs every query, in parallel, keeping their order in the report.
pub fn run_problem(p: &Problem, seed: u64) -> Report {
    let queries = in_pool(|| p.file.queries.par_iter().enumerate().map(|(i, q)| run_query(p, q, i, seed)).collect::<Vec<_>>());
    assemble(p.file.version, seed, queries)
}

pub fn assemble(version: u32, seed: u64, queries: Vec<QueryReport>) -> Report {
    let count = |s: QueryStatus| queries.iter().filter(|q| q.status == s).count();
    let summary = Summary {
        total: queries.len(),
        ok: count(QueryStatus::Ok),
        inconclusive: count(QueryStatus::Inconclusive),
        failed: count(QueryStatus::Failed),
        error: count(QueryStatus::Error),
    };
    let exit_code = exit_code(queries.iter().map(|q| q.status));
    Report { version, seed, queries, summary, exit_code }
}

/// One row of an oracle comparison.
#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub id: String,
    pub exact: String,
    pub estimated: String,
    pub gap: Value,
    pub unboundedness_agrees: bool,
    pub within_tolerance: bool,
}

/// Re-runs every `subdiff` query of the problem through the sampling estimator.
pub fn oracle_compare(p: &Problem, seed: u64) -> Result<Vec<OracleRow>, String> {
    let rows: Vec<Result<Option<OracleRow>, String>> = in_pool(|| {
        p.file.queries.par_iter().enumerate().map(|(i, q)| {
            if q.op != Some(Op::Subdiff) || q.kind == Some(Kind::LimitingPlain) {
                return Ok(None);
            }
            p.validate_query(q)?;
            let exact_q = Query { expect: None, stated: None, ..q.clone() };
            let est_q = Query { op: Some(Op::Estimate), ..exact_q.clone() };
            let exact = run_query(p, &exact_q, i, seed);
            let est = run_query(p, &est_q, i, seed);
            for r in [&exact, &est] {
                if let Some(e) = &r.error {
                    return Err(format!("{}: {e}", q.label(i)));
                }
            }
            let (e, s): (IntervalSet, IntervalSet) = (exact.outcome.parse().expect("set"), est.outcome.parse().expect("set"));
            let gap = e.hausdorff_bounded(&s, 1e6);
            let flags = e.left_unbounded() == s.left_unbounded() && e.right_unbounded() == s.right_unbounded();
            Ok(Some(OracleRow {
                id: exact.id,
                exact: e.to_string(),
                estimated: s.to_string(),
                gap: num(gap),
                unboundedness_agrees: flags,
                within_tolerance: flags && gap <= ORACLE_GAP,
            }))
        })
        .collect()
    });
    rows.into_iter().filter_map(Result::transpose).collect()
}
