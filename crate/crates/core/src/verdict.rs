//! Three-valued verdicts with a signed margin.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    In,
    Out,
    Unknown,
}

/// A verdict together with how far the tested quantity sits from its threshold.
/// Positive margins favour `In`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trit {
    pub verdict: Verdict,
    pub margin: f64,
}

impl Trit {
    pub fn is_in(&self) -> bool {
        self.verdict == Verdict::In
    }

    pub fn is_out(&self) -> bool {
        self.verdict == Verdict::Out
    }

    /// `In` when `margin ≥ -tol`, `Out` when `margin < -3·tol`, otherwise `Unknown`.
    pub fn from_margin(margin: f64, tol: f64) -> Trit {
        let verdict = if margin >= -tol {
            Verdict::In
        } else if margin < -3.0 * tol {
            Verdict::Out
        } else {
            Verdict::Unknown
        };
        Trit { verdict, margin }
    }
}
