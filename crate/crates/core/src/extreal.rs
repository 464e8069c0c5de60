//! Extended real numbers `ℝ ∪ {±∞}` with the sum convention `∞ − ∞ = ∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// An extended real value. Finite values are never NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Converts an `f64`, mapping the IEEE infinities to `±∞`. Returns `None` for NaN.
    pub fn from_f64(v: f64) -> Option<ExtReal> {
        if v.is_nan() {
            None
        } else if v == f64::INFINITY {
            Some(ExtReal::PosInf)
        } else if v == f64::NEG_INFINITY {
            Some(ExtReal::NegInf)
        } else {
            Some(ExtReal::Finite(v))
        }
    }

    /// The value as an `f64`, with `±∞` mapped to the IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// Sum with `(+∞) + (−∞) = +∞`.
pub fn ext_add(a: ExtReal, b: ExtReal) -> ExtReal {
    match (a, b) {
        (ExtReal::PosInf, _) | (_, ExtReal::PosInf) => ExtReal::PosInf,
        (ExtReal::NegInf, _) | (_, ExtReal::NegInf) => ExtReal::NegInf,
        (ExtReal::Finite(x), ExtReal::Finite(y)) => {
            ExtReal::from_f64(x + y).expect("finite sum is not NaN")
        }
    }
}

/// `f64` addition following the same convention; used on the hot evaluation paths.
pub fn add_f64(a: f64, b: f64) -> f64 {
    if a == f64::INFINITY || b == f64::INFINITY {
        f64::INFINITY
    } else {
        a + b
    }
}

impl std::ops::Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        ext_add(self, rhs)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(v) => ExtReal::Finite(-v),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &ExtReal) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl From<f64> for ExtReal {
    /// Panics on NaN.
    fn from(v: f64) -> ExtReal {
        ExtReal::from_f64(v).expect("NaN is not an extended real")
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Parses `inf`, `+inf`, `-inf`, `infinity` or a decimal literal.
impl std::str::FromStr for ExtReal {
    type Err = String;
    fn from_str(s: &str) -> Result<ExtReal, String> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" | "∞" | "+∞" => Ok(ExtReal::PosInf),
            "-inf" | "-infinity" | "-∞" => Ok(ExtReal::NegInf),
            _ => t
                .parse::<f64>()
                .ok()
                .and_then(ExtReal::from_f64)
                .ok_or_else(|| format!("not an extended real: {s:?}")),
        }
    }
}

// Finite values serialize as JSON numbers, infinities as the strings "inf"/"-inf".
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => serializer.serialize_f64(*v),
            ExtReal::PosInf => serializer.serialize_str("inf"),
            ExtReal::NegInf => serializer.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<ExtReal, D::Error> {
        struct ExtVisitor;
        impl Visitor<'_> for ExtVisitor {
            type Value = ExtReal;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a number or one of \"inf\", \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
                ExtReal::from_f64(v).ok_or_else(|| E::custom("NaN"))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
                Ok(ExtReal::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
                Ok(ExtReal::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
                v.parse().map_err(E::custom)
            }
        }
        deserializer.deserialize_any(ExtVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn infinity_minus_infinity_is_infinity() {
        assert_eq!(ext_add(ExtReal::PosInf, ExtReal::NegInf), ExtReal::PosInf);
        assert_eq!(ext_add(ExtReal::NegInf, ExtReal::PosInf), ExtReal::PosInf);
    }

    #[test]
    fn finite_cases() {
        assert_eq!(ext_add(ExtReal::ZERO, ExtReal::ZERO), ExtReal::ZERO);
        assert_eq!(ext_add(ExtReal::Finite(3.5), ExtReal::NegInf), ExtReal::NegInf);
        assert_eq!(ext_add(ExtReal::Finite(1.5), ExtReal::Finite(2.0)), ExtReal::Finite(3.5));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("-inf".parse::<ExtReal>().unwrap(), ExtReal::NegInf);
        assert_eq!("inf".parse::<ExtReal>().unwrap(), ExtReal::PosInf);
        assert_eq!("0.25".parse::<ExtReal>().unwrap(), ExtReal::Finite(0.25));
        assert!("nan".parse::<ExtReal>().is_err());
        assert_eq!(ExtReal::NegInf.to_string(), "-inf");
    }

    fn sign_class() -> impl Strategy<Value = ExtReal> {
        prop_oneof![
            Just(ExtReal::NegInf),
            Just(ExtReal::PosInf),
            (-1e6f64..1e6).prop_map(ExtReal::Finite),
        ]
    }

    proptest! {
        #[test]
        fn add_commutes_and_zero_is_identity(a in sign_class(), b in sign_class()) {
            prop_assert_eq!(ext_add(a, b), ext_add(b, a));
            prop_assert_eq!(ext_add(a, ExtReal::ZERO), a);
            prop_assert_eq!(add_f64(a.to_f64(), b.to_f64()), ext_add(a, b).to_f64());
        }
    }
}
