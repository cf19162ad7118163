//! Extended-real helpers: serde encoding of `f64` values that may be infinite
//! and tolerant comparisons in the log domain.
//!
//! JSON has no infinity literal, so `+inf` and `-inf` are written as the
//! strings `"inf"` and `"-inf"`. Finite values stay plain numbers.

use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Default log-domain tolerance.
pub const LOG_TOL: f64 = 1e-9;

/// `a <= b` up to a tolerance relative to the magnitude of the operands.
pub fn log_le(a: f64, b: f64, tol: f64) -> bool {
    if a <= b {
        return true;
    }
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    a - b <= tol * 1f64.max(a.abs()).max(b.abs())
}

/// `|a - b|` within a magnitude-relative tolerance; equal infinities compare equal.
pub fn log_eq(a: f64, b: f64, tol: f64) -> bool {
    log_le(a, b, tol) && log_le(b, a, tol)
}

/// Wrapper that (de)serializes an extended real.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtReal(pub f64);

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v == f64::INFINITY {
            s.serialize_str("inf")
        } else if v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else {
            s.serialize_f64(v)
        }
    }
}

struct ExtVisitor;

impl Visitor<'_> for ExtVisitor {
    type Value = ExtReal;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or one of \"inf\", \"-inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
        Ok(ExtReal(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
        Ok(ExtReal(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
        Ok(ExtReal(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
        match v {
            "inf" | "+inf" | "Infinity" => Ok(ExtReal(f64::INFINITY)),
            "-inf" | "-Infinity" => Ok(ExtReal(f64::NEG_INFINITY)),
            other => Err(E::custom(format!("unrecognised extended real {other:?}"))),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ExtVisitor)
    }
}

/// `#[serde(with = "ext::scalar")]` for a single `f64`.
pub mod scalar {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        ExtReal(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(ExtReal::deserialize(d)?.0)
    }
}

/// `#[serde(with = "ext::vec")]` for `Vec<f64>`.
pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&ExtReal(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw: Vec<ExtReal> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|x| x.0).collect())
    }
}

/// `#[serde(with = "ext::map")]` for `BTreeMap<String, f64>`.
pub mod map {
    use super::*;

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        let mut out = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            out.serialize_entry(k, &ExtReal(*v))?;
        }
        out.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        let raw: BTreeMap<String, ExtReal> = BTreeMap::deserialize(d)?;
        Ok(raw.into_iter().map(|(k, v)| (k, v.0)).collect())
    }
}

/// `#[serde(with = "ext::pairs")]` for `Vec<(f64, f64)>`.
pub mod pairs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[(f64, f64)], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for (a, b) in v {
            seq.serialize_element(&[ExtReal(*a), ExtReal(*b)])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(f64, f64)>, D::Error> {
        let raw: Vec<[ExtReal; 2]> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|[a, b]| (a.0, b.0)).collect())
    }
}
