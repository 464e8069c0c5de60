//! Problem-file ingestion, query execution and JSON reporting for the relative
//! subdifferential toolkit.

pub mod engine;
pub mod problem;

pub use engine::{exit_code, oracle_compare, run_problem, run_query, OracleRow, QueryReport, QueryStatus, Report};
pub use problem::{InputError, Kind, Op, Problem, ProblemFile, Query};

/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 3;
