use super::LogSequence;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A run of indices `start..=end` on which `log μ_{i+1} = log μ_i + log_beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    #[serde(with = "big_string")]
    pub start: BigUint,
    #[serde(with = "big_string")]
    pub end: BigUint,
    pub log_beta: f64,
}

impl Block {
    pub fn len(&self) -> BigUint {
        &self.end - &self.start + 1u32
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }
}

/// Exact closed-form values at an index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    #[serde(with = "big_string")]
    pub index: BigUint,
    pub log_mu: f64,
    pub log_m: f64,
}

/// Sequence given by a materialized head followed by geometric quotient
/// blocks. Values at indices far beyond the head are obtained from
/// arithmetic-series block sums and never require materialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSequence {
    pub head: LogSequence,
    pub blocks: Vec<Block>,
    /// Values at every block start and one past the last block.
    pub anchors: Vec<Anchor>,
}

impl BlockSequence {
    /// Build from blocks starting at `origin`, where `log μ` and `log M` are
    /// given. Anchors are filled by closed-form block sums.
    pub fn new(head: LogSequence, origin: Anchor, blocks: Vec<Block>) -> Result<Self> {
        let mut anchors = vec![origin];
        for (i, b) in blocks.iter().enumerate() {
            let last = anchors.last().unwrap();
            if b.start != last.index || b.is_empty() {
                return Err(Error::InvalidSequence(format!("block {i} does not continue the previous one")));
            }
            if !b.log_beta.is_finite() {
                return Err(Error::InvalidSequence(format!("block {i} has non-finite log_beta")));
            }
            let len = big_to_f64(&b.len());
            let (log_mu, log_m) = advance(last.log_mu, last.log_m, b.log_beta, len);
            anchors.push(Anchor { index: &b.end + 1u32, log_mu, log_m });
        }
        Ok(BlockSequence { head, blocks, anchors })
    }

    /// Last index at which the sequence is defined.
    pub fn coverage(&self) -> BigUint {
        self.anchors.last().map(|a| a.index.clone()).unwrap_or_else(Zero::zero)
    }

    pub fn head_len(&self) -> usize {
        self.head.truncation()
    }

    /// Head value at `p`, bit-for-bit.
    pub fn materialize(&self, p: usize) -> Option<(f64, f64)> {
        (p <= self.head_len()).then(|| (self.head.logmu()[p], self.head.logm()[p]))
    }

    /// `(log μ_p, log M_p)` at an arbitrary index.
    pub fn eval(&self, p: &BigUint) -> Result<(f64, f64)> {
        if let Some(small) = p.to_usize() {
            if let Some(v) = self.materialize(small) {
                return Ok(v);
            }
        }
        let first = &self.anchors[0];
        if p < &first.index || p > &self.coverage() {
            return Err(Error::OutOfRange(p.to_string()));
        }
        let k = self.anchors.partition_point(|a| &a.index <= p) - 1;
        let a = &self.anchors[k];
        if k == self.blocks.len() {
            return Ok((a.log_mu, a.log_m));
        }
        let d = big_to_f64(&(p - &a.index));
        Ok(advance(a.log_mu, a.log_m, self.blocks[k].log_beta, d))
    }

    pub fn eval_u64(&self, p: u64) -> Result<(f64, f64)> {
        self.eval(&BigUint::from(p))
    }
}

/// Move `d` steps through a block with constant `log β`.
fn advance(log_mu: f64, log_m: f64, log_beta: f64, d: f64) -> (f64, f64) {
    let mu = log_mu + d * log_beta;
    let m = log_m + d * log_mu + log_beta * d * (d + 1.0) / 2.0;
    (mu, m)
}

/// Nearest `f64` to an unbounded integer (`+inf` beyond the float range).
pub fn big_to_f64(n: &BigUint) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// Natural logarithm of an unbounded integer.
pub fn big_ln(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    if n.is_one() {
        return 0.0;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return big_to_f64(n).ln();
    }
    let shift = bits - 64;
    big_to_f64(&(n >> shift)).ln() + shift as f64 * std::f64::consts::LN_2
}

pub mod big_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::parse_bytes(text.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("bad integer"))
    }
}
