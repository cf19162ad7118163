//! Three-valued verdicts with witnesses and counterexamples.

use crate::ext;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Inconclusive,
    Fails,
}

impl Status {
    /// Combine two statuses for a conjunction: any failure wins, then any
    /// inconclusive part.
    pub fn and(self, other: Status) -> Status {
        self.max(other)
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// A point at which a condition is violated. `value` is the left-hand side
/// observed there and `bound` the best candidate right-hand side, so a
/// violation always reads `value > bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub second_index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub argument: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    #[serde(with = "ext::scalar")]
    pub value: f64,
    #[serde(with = "ext::scalar")]
    pub bound: f64,
}

impl Counterexample {
    pub fn at_index(index: usize, value: f64, bound: f64) -> Self {
        Counterexample { index: Some(index as u64), second_index: None, argument: None, label: None, value, bound }
    }

    pub fn at_pair(p: usize, q: usize, value: f64, bound: f64) -> Self {
        Counterexample { second_index: Some(q as u64), ..Self::at_index(p, value, bound) }
    }

    pub fn at_argument(t: f64, value: f64, bound: f64) -> Self {
        Counterexample { index: None, second_index: None, argument: Some(t), label: None, value, bound }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    #[serde(with = "ext::scalar")]
    pub lo: f64,
    #[serde(with = "ext::scalar")]
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Self {
        Window { lo, hi }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(with = "ext::map", default)]
    pub witness: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
    pub window: Window,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Verdict {
    pub fn holds(window: Window) -> Self {
        Verdict { status: Status::Holds, witness: BTreeMap::new(), counterexample: None, window, note: None }
    }

    pub fn fails(window: Window, cx: Counterexample) -> Self {
        Verdict { status: Status::Fails, witness: BTreeMap::new(), counterexample: Some(cx), window, note: None }
    }

    pub fn inconclusive(window: Window, note: impl Into<String>) -> Self {
        Verdict {
            status: Status::Inconclusive,
            witness: BTreeMap::new(),
            counterexample: None,
            window,
            note: Some(note.into()),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.witness.insert(key.to_string(), value);
        self
    }

    pub fn noted(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn witness(&self, key: &str) -> Option<f64> {
        self.witness.get(key).copied()
    }

    /// Structural invariants: failures carry a counterexample, successes
    /// carry at least one witness value.
    pub fn is_well_formed(&self) -> bool {
        match self.status {
            Status::Fails => self.counterexample.is_some(),
            Status::Holds => !self.witness.is_empty(),
            Status::Inconclusive => true,
        }
    }
}
