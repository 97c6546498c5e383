//! Values in the extended half-line `[0, ∞]`.
//!
//! Edge labels live here. Addition is extended by `t + ∞ = ∞ = ∞ + t`;
//! equality of finite values is exact (labels are data, not measurements).

use std::fmt;
use std::ops::Add;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExtRealError {
    #[error("value {0} is negative")]
    Negative(f64),
    #[error("value is NaN")]
    Nan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub const INF: ExtReal = ExtReal::Infinity;
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    pub fn finite(v: f64) -> Result<ExtReal, ExtRealError> {
        if v.is_nan() {
            Err(ExtRealError::Nan)
        } else if v < 0.0 {
            Err(ExtRealError::Negative(v))
        } else if v.is_infinite() {
            Ok(ExtReal::Infinity)
        } else {
            Ok(ExtReal::Finite(v))
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtReal::Finite(v) if *v == 0.0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(*v),
            ExtReal::Infinity => None,
        }
    }

    /// `e^{-s}`, with `e^{-∞} = 0`.
    pub fn exp_neg(&self) -> f64 {
        match self {
            ExtReal::Finite(v) => (-v).exp(),
            ExtReal::Infinity => 0.0,
        }
    }

    /// `1 - e^{-s}`, computed without cancellation near 0.
    pub fn one_minus_exp_neg(&self) -> f64 {
        match self {
            ExtReal::Finite(v) => -(-v).exp_m1(),
            ExtReal::Infinity => 1.0,
        }
    }

    /// Sum with the empty sum equal to 0.
    pub fn sum<I: IntoIterator<Item = ExtReal>>(values: I) -> ExtReal {
        values.into_iter().fold(ExtReal::ZERO, Add::add)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinity,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::Finite(_), ExtReal::Infinity) => Some(std::cmp::Ordering::Less),
            (ExtReal::Infinity, ExtReal::Finite(_)) => Some(std::cmp::Ordering::Greater),
            (ExtReal::Infinity, ExtReal::Infinity) => Some(std::cmp::Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<ExtReal, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ExtReal;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a non-negative number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
                ExtReal::finite(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
                Ok(ExtReal::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
                ExtReal::finite(v as f64).map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
                match v {
                    "inf" | "Inf" | "infinity" | "∞" => Ok(ExtReal::Infinity),
                    _ => Err(E::custom(format!("unknown label value {v:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}
