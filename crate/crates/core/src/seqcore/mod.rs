//! Log-domain weight sequences and their classical conditions.
//!
//! A sequence is stored as `logm[p] = ln M_p` for `p = 0..=P`. The quotients
//! `logmu[p] = logm[p] - logm[p - 1]` (with `logmu[0] = 0`) are derived on
//! construction. Entries may be `+inf` only for sequences generated from a
//! weight function, and only as a closed tail.

mod block;
mod conditions;

pub use block::{big_ln, big_string, big_to_f64, Anchor, Block, BlockSequence};
pub use conditions::{check_lc, check_sequence_condition, check_sequence_condition_with, SeqCondition};

use crate::error::{Error, Result};
use crate::ext;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

/// Where a sequence came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    /// `M_p = (p!)^s`.
    Gevrey { s: f64 },
    /// User-supplied values.
    Explicit,
    /// Row of a weight matrix generated from a weight function; may carry `+inf`.
    Weight {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<f64>,
    },
    /// Head of a constructed oscillating sequence.
    Oscillator,
}

impl Provenance {
    pub fn allows_infinite(&self) -> bool {
        matches!(self, Provenance::Weight { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceFile", into = "SequenceFile")]
pub struct LogSequence {
    name: String,
    provenance: Provenance,
    logm: Vec<f64>,
    logmu: Vec<f64>,
    first_infinite: Option<usize>,
}

/// On-disk form of a [`LogSequence`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceFile {
    pub name: String,
    #[serde(flatten)]
    pub provenance: Provenance,
    #[serde(with = "ext::vec", default)]
    pub log_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

impl TryFrom<SequenceFile> for LogSequence {
    type Error = Error;

    fn try_from(f: SequenceFile) -> Result<Self> {
        match (&f.provenance, f.log_values.is_empty()) {
            (Provenance::Gevrey { s }, true) => {
                let p = f.truncation.ok_or_else(|| {
                    Error::InvalidSequence("gevrey file needs log_values or truncation".into())
                })?;
                let mut g = LogSequence::gevrey(*s, p)?;
                g.name = f.name;
                Ok(g)
            }
            _ => LogSequence::new(f.name, f.provenance, f.log_values),
        }
    }
}

impl From<LogSequence> for SequenceFile {
    fn from(s: LogSequence) -> Self {
        SequenceFile { name: s.name, provenance: s.provenance, log_values: s.logm, truncation: None }
    }
}

impl LogSequence {
    /// Validate and wrap `logm`.
    pub fn new(name: impl Into<String>, provenance: Provenance, logm: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if logm.len() < 9 {
            return Err(Error::InvalidSequence(format!("{name}: truncation {} < 8", logm.len().saturating_sub(1))));
        }
        if !logm[0].is_finite() {
            return Err(Error::InvalidSequence(format!("{name}: logm[0] must be finite")));
        }
        let mut seen_inf = false;
        for (p, &v) in logm.iter().enumerate() {
            if v.is_nan() || v == f64::NEG_INFINITY {
                return Err(Error::InvalidSequence(format!("{name}: logm[{p}] = {v}")));
            }
            if v == f64::INFINITY {
                if !provenance.allows_infinite() {
                    return Err(Error::InvalidSequence(format!("{name}: +inf at {p} in a non-generated sequence")));
                }
                seen_inf = true;
            } else if seen_inf {
                return Err(Error::InvalidSequence(format!("{name}: finite logm[{p}] after +inf")));
            }
        }
        let logmu = quotients(&logm);
        let first_infinite = logm.iter().position(|v| v.is_infinite());
        Ok(LogSequence { name, provenance, logm, logmu, first_infinite })
    }

    /// Like [`LogSequence::new`], keeping quotients computed upstream instead
    /// of differencing `logm`, which loses digits once `logm` is large.
    pub fn with_quotients(name: impl Into<String>, provenance: Provenance, logm: Vec<f64>, logmu: Vec<f64>) -> Result<Self> {
        let mut seq = LogSequence::new(name, provenance, logm)?;
        if logmu.len() != seq.logm.len() {
            return Err(Error::InvalidSequence(format!("{}: {} quotients for {} entries", seq.name, logmu.len(), seq.logm.len())));
        }
        for (p, (a, b)) in logmu.iter().zip(&seq.logmu).enumerate() {
            if a.is_infinite() != b.is_infinite() || (a.is_finite() && (a - b).abs() > 1e-6 * a.abs().max(1.0)) {
                return Err(Error::InvalidSequence(format!("{}: quotient {p} disagrees with logm", seq.name)));
            }
        }
        seq.logmu = logmu;
        Ok(seq)
    }

    /// The Gevrey sequence `M_p = (p!)^s`, `logm[p] = s ln Γ(p + 1)`.
    pub fn gevrey(s: f64, truncation: usize) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParameter(format!("gevrey exponent {s} must be positive")));
        }
        let logm = (0..=truncation)
            .map(|p| if p <= 1 { 0.0 } else { s * ln_gamma(p as f64 + 1.0) })
            .collect();
        LogSequence::new(format!("gevrey:{s}"), Provenance::Gevrey { s }, logm)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Truncation index P.
    pub fn truncation(&self) -> usize {
        self.logm.len() - 1
    }

    pub fn logm(&self) -> &[f64] {
        &self.logm
    }

    pub fn logmu(&self) -> &[f64] {
        &self.logmu
    }

    pub fn quotients(&self) -> QuotientView<'_> {
        QuotientView { logmu: &self.logmu }
    }

    /// True if some entry is `+inf`.
    pub fn is_exotic(&self) -> bool {
        self.logm.last().is_some_and(|v| v.is_infinite())
    }

    /// First index carrying `+inf`, if any.
    pub fn first_infinite(&self) -> Option<usize> {
        self.first_infinite
    }

    /// Prefix `0..=p` as a new sequence.
    pub fn prefix(&self, p: usize) -> Result<Self> {
        let p = p.min(self.truncation());
        LogSequence::new(self.name.clone(), self.provenance.clone(), self.logm[..=p].to_vec())
    }

    /// Multiply `M_p` by `c^p`.
    pub fn scaled(&self, log_c: f64) -> Result<Self> {
        let logm = self.logm.iter().enumerate().map(|(p, v)| v + p as f64 * log_c).collect();
        LogSequence::new(format!("{}*c^p", self.name), Provenance::Explicit, logm)
    }

    /// `ln M_p^{1/p}` for `p ≥ 1`.
    pub fn root(&self, p: usize) -> f64 {
        self.logm[p] / p as f64
    }
}

/// Read-only view of the quotient sequence `μ_p = M_p / M_{p-1}` in log form.
#[derive(Debug, Clone, Copy)]
pub struct QuotientView<'a> {
    logmu: &'a [f64],
}

impl QuotientView<'_> {
    pub fn log_mu(&self, p: usize) -> f64 {
        self.logmu[p]
    }

    pub fn as_slice(&self) -> &[f64] {
        self.logmu
    }

    /// Reconstruct `logm` by cumulative summation.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.logmu
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect()
    }
}

fn quotients(logm: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(logm.len());
    out.push(0.0);
    for p in 1..logm.len() {
        let d = if logm[p].is_infinite() { f64::INFINITY } else { logm[p] - logm[p - 1] };
        out.push(d);
    }
    out
}
