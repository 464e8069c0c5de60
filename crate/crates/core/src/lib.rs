//! Relative subdifferentials of extended-real piecewise functions.
//!
//! The crate is layered bottom-up:
//! - [`extreal`] and [`interval`]: extended reals and exact finite unions of intervals;
//! - [`sets`]: closed sets in ℝⁿ (n ≤ 3), tangent cones, ε-normals and projections;
//! - [`funcdsl`]: a small expression language for piecewise functions;
//! - [`subdiff`]: the exact one-dimensional engine;
//! - [`estimator`]: a sampling oracle used to cross-check the exact engine;
//! - [`calculus`] and [`analysis`]: rule verifiers and optimality/mean-value tools.

pub mod analysis;
pub mod calculus;
pub mod corpus;
pub mod estimator;
pub mod extreal;
pub mod funcdsl;
pub mod interval;
pub mod sets;
pub mod subdiff;
pub mod verdict;

pub use extreal::{ext_add, ExtReal};
pub use interval::{outer_limit, outer_limit_scaled, Interval, IntervalSet, OuterLimit};
pub use verdict::{Trit, Verdict};
