//! Piecewise extended-real functions: formulas, guards, restriction and sampled regularity.

pub mod expr;
pub mod lip;
pub mod parse;
pub mod piecewise;
pub mod region;

pub use expr::{EvalError, Expr};
pub use lip::{check_lsc_relative, lip_estimate, lsc_around, LipEstimate, LscAround};
pub use parse::{parse_expr, parse_guard, ParseError};
pub use piecewise::{FuncError, Piece, PiecewiseFunc};
pub use region::{LinCon, Region};
