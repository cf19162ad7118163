//! Textual weight specs: `t^a`, `log1p`, `logtrunc`,
//! `assoc:<file>` and `gevrey:<s>`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::assocfn::WeightFn;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::seqcore::LogSequence;

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Power(f64),
    Log1p,
    LogTrunc,
    /// Associated function of a sequence stored as JSON.
    Assoc(PathBuf),
    /// `ω_{G^s}`; as a sequence, `G^s` itself.
    Gevrey(f64),
}

fn number(text: &str, offset: usize, src: &str) -> Result<f64> {
    let v: f64 = text.parse().map_err(|_| {
        Error::InvalidParameter(format!("weight spec {src:?}: expected a number at column {}, found {text:?}", offset + 1))
    })?;
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "weight spec {src:?}: exponent at column {} must be positive and finite",
            offset + 1
        )));
    }
    Ok(v)
}

impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let s = src.trim();
        let lead = src.len() - src.trim_start().len();
        if let Some(a) = s.strip_prefix("t^") {
            return Ok(WeightSpec::Power(number(a, lead + 2, src)?));
        }
        if let Some(v) = s.strip_prefix("gevrey:") {
            return Ok(WeightSpec::Gevrey(number(v, lead + 7, src)?));
        }
        if let Some(p) = s.strip_prefix("assoc:") {
            if p.is_empty() {
                return Err(Error::InvalidParameter(format!("weight spec {src:?}: missing file at column {}", lead + 7)));
            }
            return Ok(WeightSpec::Assoc(PathBuf::from(p)));
        }
        match s {
            "log1p" => Ok(WeightSpec::Log1p),
            "logtrunc" => Ok(WeightSpec::LogTrunc),
            _ => Err(Error::InvalidParameter(format!(
                "weight spec {src:?}: unknown form at column {} (expected t^a, log1p, logtrunc, assoc:<file> or gevrey:<s>)",
                lead + 1
            ))),
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Power(a) => write!(f, "t^{a}"),
            WeightSpec::Log1p => f.write_str("log1p"),
            WeightSpec::LogTrunc => f.write_str("logtrunc"),
            WeightSpec::Assoc(p) => write!(f, "assoc:{}", p.display()),
            WeightSpec::Gevrey(s) => write!(f, "gevrey:{s}"),
        }
    }
}

impl Serialize for WeightSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WeightSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Read a sequence stored as JSON.
pub fn load_sequence(path: &std::path::Path) -> Result<LogSequence> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

impl WeightSpec {
    /// The sequence behind a spec, if it names one.
    pub fn sequence(&self, cfg: &RunConfig) -> Result<Option<LogSequence>> {
        match self {
            WeightSpec::Gevrey(s) => Ok(Some(LogSequence::gevrey(*s, cfg.truncation)?)),
            WeightSpec::Assoc(p) => Ok(Some(load_sequence(p)?)),
            _ => Ok(None),
        }
    }

    pub fn weight(&self, cfg: &RunConfig) -> Result<WeightFn> {
        match self {
            WeightSpec::Power(a) => WeightFn::power(*a),
            WeightSpec::Log1p => Ok(WeightFn::shifted_log()),
            WeightSpec::LogTrunc => Ok(WeightFn::trunc_log()),
            _ => Ok(WeightFn::associated(self.sequence(cfg)?.unwrap())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_render_round_trip() {
        for text in ["t^2", "t^1.5", "log1p", "logtrunc", "assoc:data/m.json", "gevrey:0.5", "gevrey:0.25"] {
            let spec: WeightSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            assert_eq!(spec.to_string().parse::<WeightSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn errors_point_at_the_column() {
        let e = "t^x".parse::<WeightSpec>().unwrap_err().to_string();
        assert!(e.contains("column 3"), "{e}");
        assert!("gevrey:-1".parse::<WeightSpec>().is_err());
        assert!("sin".parse::<WeightSpec>().is_err());
        assert!("assoc:".parse::<WeightSpec>().is_err());
    }

    proptest::proptest! {
        #[test]
        fn numeric_specs_round_trip(a in 1e-6f64..1e6, gevrey in proptest::bool::ANY) {
            let spec = if gevrey { WeightSpec::Gevrey(a) } else { WeightSpec::Power(a) };
            proptest::prop_assert_eq!(spec.to_string().parse::<WeightSpec>().unwrap(), spec);
        }
    }
}
