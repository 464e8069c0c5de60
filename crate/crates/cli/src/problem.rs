//! Problem files: named sets and functions plus an ordered list of queries, in TOML.

use std::collections::BTreeMap;
use std::path::Path;

use relsub::estimator::Schedule;
use relsub::funcdsl::PiecewiseFunc;
use relsub::interval::IntervalSet;
use relsub::sets::{ClosedSet, HalfSpace};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const VERSION: u32 = 1;

/// A problem that cannot be run as given. Maps to exit code 3.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{0}")]
    Syntax(String),
    #[error("{at}: {msg}")]
    Field { at: String, msg: String },
}

fn field(at: impl Into<String>, msg: impl ToString) -> InputError {
    InputError::Field { at: at.into(), msg: msg.to_string() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Space {
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    /// A finite union of intervals, e.g. `"[0, 1] u [2, inf)"`.
    Interval(String),
    Segment { a: Vec<f64>, b: Vec<f64> },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// `{x : ⟨normal, x⟩ ≤ offset}` for every row.
    Polytope { normals: Vec<Vec<f64>>, offsets: Vec<f64>, bounded: bool },
    /// The whole space; the value is ignored.
    Whole(bool),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    /// `[guard, formula]` pairs, evaluated by the first matching guard.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<(String, String)>>,
    /// Value off all guards (default `inf`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Subdiff,
    Estimate,
    InclusionChain,
    ScalarRule,
    LipschitzBound,
    SumRule,
    FuzzySum,
    Fermat,
    SumOptimality,
    ApproxOptimality,
    LocalMin,
    MeanValue,
    Convexity,
    Monotonicity,
    Equivalence,
}

/// Which subdifferential a `subdiff` or `estimate` query computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `∂̂^ε_Ω f`, with `eps` defaulting to 0.
    EpsRegular,
    /// `∂_Ω f`.
    Limiting,
    /// `∂f_Ω`, the limiting subdifferential of the restriction.
    LimitingPlain,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub op: Option<Op>,
    #[serde(rename = "fn", default, skip_serializing_if = "Option::is_none")]
    pub func: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fn2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xstar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    /// Asserted outcome: a set for `subdiff`/`estimate`, otherwise a verdict word.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    /// Value stated by the literature for a `subdiff` query; a mismatch is flagged, not failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stated: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(default)]
    pub seed: u64,
    pub space: Space,
    #[serde(default)]
    pub sets: BTreeMap<String, SetSpec>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default)]
    pub queries: Vec<Query>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, InputError> {
        toml::from_str(text).map_err(|e| InputError::Syntax(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files serialize")
    }
}

/// A validated problem with its sets and functions built.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub sets: BTreeMap<String, ClosedSet>,
    pub funcs: BTreeMap<String, PiecewiseFunc>,
}

fn build_set(spec: &SetSpec, dim: usize) -> Result<ClosedSet, String> {
    let s = match spec {
        SetSpec::Interval(src) => {
            if dim != 1 {
                return Err(format!("interval sets need dimension 1, the space has {dim}"));
            }
            let set: IntervalSet = src.parse().map_err(|e| format!("{e}"))?;
            ClosedSet::interval_1d(set)
        }
        SetSpec::Segment { a, b } => ClosedSet::segment(a.clone(), b.clone()),
        SetSpec::Box { lo, hi } => ClosedSet::boxed(lo.clone(), hi.clone()),
        SetSpec::Polytope { normals, offsets, bounded } => {
            if normals.len() != offsets.len() {
                return Err("normals and offsets differ in length".into());
            }
            let rows = normals.iter().zip(offsets).map(|(n, o)| HalfSpace::new(n.clone(), *o)).collect();
            ClosedSet::polytope(dim, rows, *bounded)
        }
        SetSpec::Whole(_) => ClosedSet::whole(dim),
    }
    .map_err(|e| e.to_string())?;
    if s.dim() != dim {
        return Err(format!("set has dimension {}, the space has {dim}", s.dim()));
    }
    Ok(s)
}

fn build_func(spec: &FunctionSpec, dim: usize, sets: &BTreeMap<String, ClosedSet>) -> Result<PiecewiseFunc, String> {
    match (&spec.formula, &spec.pieces) {
        (Some(src), None) if spec.default.is_none() => PiecewiseFunc::formula(dim, src).map_err(|e| e.to_string()),
        (None, Some(pieces)) => {
            let refs: Vec<(&str, &str)> = pieces.iter().map(|(g, e)| (g.as_str(), e.as_str())).collect();
            PiecewiseFunc::from_source(dim, &refs, spec.default.as_deref().unwrap_or("inf"), sets).map_err(|e| e.to_string())
        }
        (Some(_), None) => Err("`default` applies to `pieces` only".into()),
        _ => Err("give exactly one of `formula` or `pieces`".into()),
    }
}

/// Fields each operation needs.
fn required(op: Op) -> &'static [&'static str] {
    match op {
        Op::Subdiff | Op::Estimate | Op::InclusionChain | Op::Fermat => &["fn", "set", "point"],
        Op::ScalarRule => &["fn", "set", "point", "lambda"],
        Op::LipschitzBound => &["fn", "set", "point"],
        Op::SumRule | Op::SumOptimality => &["fn", "fn2", "set", "point"],
        Op::FuzzySum => &["fn", "fn2", "set", "point", "xstar", "eta"],
        Op::ApproxOptimality => &["fn", "fn2", "set", "point", "eta"],
        Op::LocalMin => &["fn", "set"],
        Op::MeanValue | Op::Convexity | Op::Monotonicity | Op::Equivalence => &["fn", "a", "b"],
    }
}

/// Verdict words accepted by `expect`, per operation; `None` means a set is expected.
pub fn expect_words(op: Op) -> Option<&'static [&'static str]> {
    match op {
        Op::Subdiff | Op::Estimate => None,
        Op::InclusionChain | Op::ScalarRule | Op::LipschitzBound | Op::SumRule | Op::Equivalence => {
            Some(&["holds", "fails", "inconclusive"])
        }
        Op::Fermat | Op::SumOptimality => Some(&["holds", "violated", "inconclusive"]),
        Op::Convexity | Op::Monotonicity => Some(&["in", "out", "unknown"]),
        Op::FuzzySum | Op::ApproxOptimality | Op::LocalMin | Op::MeanValue => Some(&[]),
    }
}

impl Query {
    pub fn label(&self, index: usize) -> String {
        match &self.id {
            Some(id) => format!("queries[{index}] ({id})"),
            None => format!("queries[{index}]"),
        }
    }

    fn present(&self, name: &str) -> bool {
        match name {
            "fn" => self.func.is_some(),
            "fn2" => self.fn2.is_some(),
            "set" => self.set.is_some(),
            "point" => self.point.is_some(),
            "a" => self.a.is_some(),
            "b" => self.b.is_some(),
            "lambda" => self.lambda.is_some(),
            "xstar" => self.xstar.is_some(),
            "eta" => self.eta.is_some(),
            _ => unreachable!("unknown field {name}"),
        }
    }
}

impl Problem {
    pub fn load(path: &Path) -> Result<Problem, InputError> {
        let text = std::fs::read_to_string(path).map_err(|err| InputError::Io { path: path.display().to_string(), err })?;
        Problem::from_file(ProblemFile::parse(&text)?)
    }

    pub fn from_file(file: ProblemFile) -> Result<Problem, InputError> {
        if file.version != VERSION {
            return Err(field("version", format!("unsupported version {}, expected {VERSION}", file.version)));
        }
        let dim = file.space.dim;
        if dim == 0 {
            return Err(field("space.dim", "dimension must be positive"));
        }
        let mut sets = BTreeMap::new();
        for (name, spec) in &file.sets {
            sets.insert(name.clone(), build_set(spec, dim).map_err(|m| field(format!("sets.{name}"), m))?);
        }
        let mut funcs = BTreeMap::new();
        for (name, spec) in &file.functions {
            funcs.insert(name.clone(), build_func(spec, dim, &sets).map_err(|m| field(format!("functions.{name}"), m))?);
        }
        let problem = Problem { file, sets, funcs };
        for (i, q) in problem.file.queries.iter().enumerate() {
            problem.validate_query(q).map_err(|m| field(q.label(i), m))?;
        }
        Ok(problem)
    }

    /// Checks that a query names existing objects and carries what its operation needs.
    pub fn validate_query(&self, q: &Query) -> Result<(), String> {
        let Some(op) = q.op else { return Err("missing field `op`".into()) };
        for name in required(op) {
            if !q.present(name) {
                return Err(format!("missing field `{name}` for op `{}`", op_name(op)));
            }
        }
        for name in [&q.func, &q.fn2].into_iter().flatten() {
            if !self.funcs.contains_key(name) {
                return Err(format!("unknown function `{name}`"));
            }
        }
        if let Some(s) = &q.set {
            if !self.sets.contains_key(s) {
                return Err(format!("unknown set `{s}`"));
            }
        }
        let dim = self.file.space.dim;
        for (name, v) in [("point", &q.point), ("a", &q.a), ("b", &q.b)] {
            if let Some(v) = v {
                if v.len() != dim {
                    return Err(format!("`{name}` has {} coordinates, the space has {dim}", v.len()));
                }
            }
        }
        let needs_line = !matches!(op, Op::MeanValue | Op::Convexity | Op::Monotonicity | Op::Equivalence);
        if needs_line && dim != 1 {
            return Err(format!("op `{}` works on the line; use a segment op in dimension {dim}", op_name(op)));
        }
        if let Some(sched) = &q.schedule {
            sched.validate().map_err(|e| format!("schedule: {e}"))?;
        }
        match (expect_words(op), &q.expect) {
            (_, None) => {}
            (None, Some(s)) => {
                s.parse::<IntervalSet>().map_err(|e| format!("expect: {e}"))?;
            }
            (Some(words), Some(w)) if words.contains(&w.as_str()) => {}
            (Some(words), Some(w)) => return Err(format!("expect `{w}` is not one of {words:?}")),
        }
        if let Some(p) = &q.stated {
            if !matches!(op, Op::Subdiff | Op::Estimate) {
                return Err("`stated` applies to subdiff and estimate queries".into());
            }
            p.parse::<IntervalSet>().map_err(|e| format!("stated: {e}"))?;
        }
        Ok(())
    }
}

pub fn op_name(op: Op) -> String {
    serde_json::to_value(op).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
version = 1
seed = 3
[space]
dim = 1
[sets]
omega = { interval = "[0, inf)" }
unit = { interval = "[0, 1]" }
[functions]
e1 = { pieces = [["x < 0", "-inf"], ["x = 0", "0"]], default = "inf" }
cube = { formula = "x^3/3" }
[[queries]]
id = "e1"
op = "subdiff"
fn = "e1"
set = "omega"
point = [0.0]
kind = "eps_regular"
eps = 0.1
expect = "[0, inf)"
"#;

    #[test]
    fn parses_and_round_trips() {
        let file = ProblemFile::parse(SAMPLE).unwrap();
        assert_eq!(file.queries[0].kind, Some(Kind::EpsRegular));
        let again = ProblemFile::parse(&file.to_toml()).unwrap();
        assert_eq!(file, again);
        let p = Problem::from_file(file).unwrap();
        assert_eq!(p.funcs["e1"].value(&[0.0]), 0.0);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = SAMPLE.replace("\"x = 0\"", "\"x == = 0\"");
        let err = Problem::from_file(ProblemFile::parse(&bad).unwrap()).unwrap_err();
        assert!(err.to_string().starts_with("functions.e1:"), "{err}");
        let bad = SAMPLE.replace("fn = \"e1\"", "fn = \"nope\"");
        let err = Problem::from_file(ProblemFile::parse(&bad).unwrap()).unwrap_err();
        assert_eq!(err.to_string(), "queries[0] (e1): unknown function `nope`");
        let bad = SAMPLE.replace("point = [0.0]\n", "");
        assert!(Problem::from_file(ProblemFile::parse(&bad).unwrap()).unwrap_err().to_string().contains("`point`"));
        let bad = SAMPLE.replace("eps = 0.1", "epsilon = 0.1");
        assert!(ProblemFile::parse(&bad).unwrap_err().to_string().contains("epsilon"));
        let bad = SAMPLE.replace("version = 1", "version = 2");
        assert!(Problem::from_file(ProblemFile::parse(&bad).unwrap()).is_err());
    }
}
