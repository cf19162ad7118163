//! Weight matrices: λ-indexed families of weight sequences, their
//! regularity conditions, growth relations and non-quasianalyticity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::assocfn::Case;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::ext::log_le;
use crate::relations::{seq_relate, Relation};
use crate::seqcore::{check_lc, check_sequence_condition, LogSequence, SeqCondition, SequenceFile};
use crate::trend::{self, Scale, SupTrend};
use crate::verdict::{Counterexample, Status, Verdict, Window};

/// Ordered family `λ ↦ M^(λ)` sharing one truncation, with `M^(λ)_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    name: String,
    entries: Vec<(f64, LogSequence)>,
}

impl WeightMatrix {
    pub fn new(name: impl Into<String>, mut entries: Vec<(f64, LogSequence)>) -> Result<Self> {
        let name = name.into();
        if entries.is_empty() {
            return Err(Error::InvalidMatrix(format!("{name}: no entries")));
        }
        if entries.iter().any(|(l, _)| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::InvalidMatrix(format!("{name}: parameters must be positive and finite")));
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMatrix(format!("{name}: repeated parameter")));
        }
        let p = entries[0].1.truncation();
        for (l, m) in &entries {
            if m.truncation() != p {
                return Err(Error::TruncationMismatch(p, m.truncation()));
            }
            if m.logm()[0].abs() > 1e-9 {
                return Err(Error::InvalidMatrix(format!("{name}: entry {l} has M_0 != 1")));
            }
        }
        Ok(WeightMatrix { name, entries })
    }

    /// The constant matrix with `m` at every parameter.
    pub fn constant(name: impl Into<String>, m: &LogSequence, lambdas: &[f64]) -> Result<Self> {
        Self::new(name, lambdas.iter().map(|&l| (l, m.clone())).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn truncation(&self) -> usize {
        self.entries[0].1.truncation()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.entries.iter().map(|(l, _)| *l).collect()
    }

    pub fn entries(&self) -> &[(f64, LogSequence)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at parameter `lambda` (matched to relative precision 1e-12).
    pub fn entry(&self, lambda: f64) -> Option<&LogSequence> {
        self.index_of(lambda).map(|i| &self.entries[i].1)
    }

    pub fn index_of(&self, lambda: f64) -> Option<usize> {
        self.entries.iter().position(|(l, _)| (l - lambda).abs() <= 1e-12 * lambda.abs())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    name: String,
    entries: MatrixEntries,
}

struct MatrixEntries(Vec<(f64, SequenceFile)>);

impl Serialize for MatrixEntries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (l, f) in &self.0 {
            map.serialize_entry(&format!("{l}"), f)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for MatrixEntries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, SequenceFile>::deserialize(d)?;
        let mut out = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            let l: f64 = k.parse().map_err(|_| serde::de::Error::custom(format!("bad parameter key {k:?}")))?;
            out.push((l, v));
        }
        Ok(MatrixEntries(out))
    }
}

impl Serialize for WeightMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.entries.iter().map(|(l, m)| (*l, SequenceFile::from(m.clone()))).collect();
        MatrixFile { name: self.name.clone(), entries: MatrixEntries(entries) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = MatrixFile::deserialize(d)?;
        let mut entries = Vec::with_capacity(f.entries.0.len());
        for (l, sf) in f.entries.0 {
            entries.push((l, LogSequence::try_from(sf).map_err(serde::de::Error::custom)?));
        }
        WeightMatrix::new(f.name, entries).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixCondition {
    #[serde(rename = "c12L2R")]
    C12L2R,
    #[serde(rename = "c37LR")]
    C37LR,
    #[serde(rename = "M2primeR")]
    M2PrimeR,
    #[serde(rename = "M2R")]
    M2R,
    #[serde(rename = "c12L2B")]
    C12L2B,
    #[serde(rename = "c37LB")]
    C37LB,
    #[serde(rename = "M2primeB")]
    M2PrimeB,
    #[serde(rename = "M2B")]
    M2B,
    #[serde(rename = "beurling_square")]
    BeurlingSquare,
    #[serde(rename = "monotone")]
    Monotone,
    #[serde(rename = "constant")]
    Constant,
    #[serde(rename = "standard_log_convex")]
    StandardLogConvex,
}

impl MatrixCondition {
    pub const ALL: [MatrixCondition; 12] = [
        MatrixCondition::C12L2R,
        MatrixCondition::C37LR,
        MatrixCondition::M2PrimeR,
        MatrixCondition::M2R,
        MatrixCondition::C12L2B,
        MatrixCondition::C37LB,
        MatrixCondition::M2PrimeB,
        MatrixCondition::M2B,
        MatrixCondition::BeurlingSquare,
        MatrixCondition::Monotone,
        MatrixCondition::Constant,
        MatrixCondition::StandardLogConvex,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MatrixCondition::C12L2R => "c12L2R",
            MatrixCondition::C37LR => "c37LR",
            MatrixCondition::M2PrimeR => "M2primeR",
            MatrixCondition::M2R => "M2R",
            MatrixCondition::C12L2B => "c12L2B",
            MatrixCondition::C37LB => "c37LB",
            MatrixCondition::M2PrimeB => "M2primeB",
            MatrixCondition::M2B => "M2B",
            MatrixCondition::BeurlingSquare => "beurling_square",
            MatrixCondition::Monotone => "monotone",
            MatrixCondition::Constant => "constant",
            MatrixCondition::StandardLogConvex => "standard_log_convex",
        }
    }
}

impl fmt::Display for MatrixCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MatrixCondition::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown matrix condition {s:?}")))
    }
}

/// Quantifier pattern of a matrix relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixRelation {
    /// `∀λ ∃κ: M^(λ) ⪯ N^(κ)`.
    Roumieu,
    /// `∀λ ∃κ: M^(κ) ⪯ N^(λ)`.
    Beurling,
    /// `∀λ ∀κ: M^(λ) ◁ N^(κ)`.
    Strong,
}

impl FromStr for MatrixRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "roumieu" => Ok(MatrixRelation::Roumieu),
            "beurling" => Ok(MatrixRelation::Beurling),
            "strong" => Ok(MatrixRelation::Strong),
            _ => Err(Error::InvalidParameter(format!("unknown matrix relation {s:?}"))),
        }
    }
}

/// Candidate parameters for `κ` given `λ`: Roumieu searches upwards from
/// `λ`, Beurling downwards, `Any` from the smallest parameter.
#[derive(Clone, Copy)]
enum Search {
    Up,
    Down,
    Any,
}

fn candidates(grid: &[f64], lambda: f64, dir: Search) -> Vec<usize> {
    let idx: Vec<usize> = (0..grid.len()).collect();
    match dir {
        Search::Up => {
            let mut out: Vec<usize> = idx.iter().copied().filter(|&i| grid[i] >= lambda * (1.0 - 1e-12)).collect();
            if out.is_empty() {
                out.push(grid.len() - 1);
            }
            out
        }
        Search::Down => {
            let mut out: Vec<usize> =
                idx.iter().rev().copied().filter(|&i| grid[i] <= lambda * (1.0 + 1e-12)).collect();
            if out.is_empty() {
                out.push(0);
            }
            out
        }
        Search::Any => idx,
    }
}

/// `lhs - rhs` for extended reals, with `inf ≤ inf` read as satisfied.
fn excess(lhs: f64, rhs: f64) -> f64 {
    if rhs == f64::INFINITY {
        f64::NEG_INFINITY
    } else {
        lhs - rhs
    }
}

fn xlogx_half(p: usize) -> f64 {
    if p == 0 {
        0.0
    } else {
        0.5 * p as f64 * (p as f64).ln()
    }
}

#[derive(Clone, Copy)]
enum Shape {
    /// `M_p M_q ≤ A^{p+q} N_{p+q}`.
    Product,
    /// `M_{p+1} ≤ A^{p+1} N_p`.
    Shift,
    /// `M_{p+q} ≤ A^{p+q} N_p N_q`.
    Split,
    /// `p^{p/2} M_q ≤ B C^p H^{p+q} N_{p+q}`.
    Gaussian,
    /// `M_p^2 ≤ A^p N_p`.
    Square,
}

/// Per-n worst normalized excess `x_n` with the pair attaining it.
fn profile(shape: Shape, lhs: &[f64], rhs: &[f64], n_max: usize) -> Vec<(f64, usize, usize)> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let nf = n as f64;
            let single = |v: f64, p: usize, q: usize| (v / nf, p, q);
            match shape {
                Shape::Shift => single(excess(lhs[n], rhs[n - 1]), n - 1, 1),
                Shape::Square => single(excess(2.0 * lhs[n], rhs[n]), n, 0),
                _ => {
                    let top = match shape {
                        Shape::Gaussian => n,
                        _ => n / 2,
                    };
                    let mut best = (f64::NEG_INFINITY, 0, n);
                    for p in 0..=top {
                        let q = n - p;
                        let v = match shape {
                            Shape::Product => excess(lhs[p] + lhs[q], rhs[n]),
                            Shape::Split => excess(lhs[n], rhs[p] + rhs[q]),
                            _ => excess(xlogx_half(p) + lhs[q], rhs[n]),
                        };
                        if v > best.0 || (best.0 == f64::NEG_INFINITY && v == f64::NEG_INFINITY && p == 0) {
                            best = (v, p, q);
                        }
                    }
                    (best.0 / nf, best.1, best.2)
                }
            }
        })
        .collect()
}

struct Fit {
    trend: SupTrend,
    pairs: Vec<(f64, usize, usize)>,
}

fn fit(shape: Shape, lhs: &LogSequence, rhs: &LogSequence, n_max: usize, stability: f64) -> Fit {
    let pairs = profile(shape, lhs.logm(), rhs.logm(), n_max);
    let xs: Vec<f64> = pairs.iter().map(|x| x.0).collect();
    let trend = match shape {
        Shape::Shift => trend::classify_running_max(&xs, Scale::Log, stability),
        _ => trend::classify_sup(&xs, Scale::Log, stability),
    };
    Fit { trend, pairs }
}

fn layout(cond: MatrixCondition) -> Option<(Shape, Search, bool)> {
    use MatrixCondition::*;
    Some(match cond {
        C12L2R => (Shape::Gaussian, Search::Up, false),
        C37LR => (Shape::Product, Search::Up, false),
        M2PrimeR => (Shape::Shift, Search::Up, false),
        M2R => (Shape::Split, Search::Up, false),
        C12L2B => (Shape::Gaussian, Search::Down, true),
        C37LB => (Shape::Product, Search::Down, true),
        M2PrimeB => (Shape::Shift, Search::Down, true),
        M2B => (Shape::Split, Search::Down, true),
        BeurlingSquare => (Shape::Square, Search::Any, true),
        _ => return None,
    })
}

fn scan_limit(m: &WeightMatrix, shape: Shape, cfg: &RunConfig) -> usize {
    match shape {
        Shape::Shift | Shape::Square => m.truncation(),
        _ => m.truncation().min(cfg.pair_window),
    }
}

/// A quantified condition at one fixed pair `(λ, κ)`, reporting the fitted
/// constant for that pair.
pub fn condition_at(m: &WeightMatrix, cond: MatrixCondition, lambda: f64, kappa: f64, cfg: &RunConfig) -> Result<Verdict> {
    let (shape, _, beurling) =
        layout(cond).ok_or_else(|| Error::InvalidParameter(format!("{cond} has no parameter quantifier")))?;
    let missing = |x: f64| Error::InvalidParameter(format!("{x} is not on the parameter grid of {}", m.name));
    let li = m.index_of(lambda).ok_or_else(|| missing(lambda))?;
    let ki = m.index_of(kappa).ok_or_else(|| missing(kappa))?;
    let n_max = scan_limit(m, shape, cfg);
    let win = Window::new(1.0, n_max as f64);
    let (lhs, rhs) = if beurling { (ki, li) } else { (li, ki) };
    let f = fit(shape, &m.entries[lhs].1, &m.entries[rhs].1, n_max, cfg.tolerances.stability);
    Ok(match f.trend {
        SupTrend::Bounded { sup, .. } => per_lambda_witness(&f, cond, lambda, kappa, sup, win),
        SupTrend::Unbounded { argmax, value, candidate } => {
            let (_, p, q) = f.pairs[argmax];
            Verdict::fails(win, Counterexample::at_pair(p, q, value, candidate))
        }
        SupTrend::Unclear { sup, .. } => {
            Verdict::inconclusive(win, "constant has not settled").with("log_constant_estimate", sup)
        }
    })
}

fn quantified(m: &WeightMatrix, cond: MatrixCondition, cfg: &RunConfig) -> Verdict {
    let (shape, dir, beurling) = layout(cond).expect("quantified condition");
    let n_max = scan_limit(m, shape, cfg);
    let stability = cfg.tolerances.stability;
    let grid = m.lambdas();
    let win = Window::new(1.0, n_max as f64);
    let per_lambda: Vec<Verdict> = grid
        .par_iter()
        .map(|&lambda| {
            let li = m.index_of(lambda).unwrap();
            let mut sups = Vec::new();
            let mut first_cx = None;
            let mut unclear = false;
            for ki in candidates(&grid, lambda, dir) {
                let kappa = grid[ki];
                // Roumieu: λ-entry on the left, κ-entry on the right; Beurling swaps them.
                let (lhs, rhs) = if beurling { (ki, li) } else { (li, ki) };
                let f = fit(shape, &m.entries[lhs].1, &m.entries[rhs].1, n_max, stability);
                match f.trend {
                    SupTrend::Bounded { sup, .. } => {
                        return per_lambda_witness(&f, cond, lambda, kappa, sup, win);
                    }
                    SupTrend::Unbounded { argmax, value, candidate } => {
                        let (_, pp, qq) = f.pairs[argmax];
                        first_cx.get_or_insert(
                            Counterexample::at_pair(pp, qq, value, candidate)
                                .with_label(format!("lambda = {lambda}, kappa = {kappa}")),
                        );
                        sups.push(f.trend.sup());
                    }
                    SupTrend::Unclear { .. } => unclear = true,
                }
            }
            if unclear || first_cx.is_none() {
                return Verdict::inconclusive(win, format!("lambda = {lambda}: no grid kappa gives a settled constant"));
            }
            let improving = sups.len() > 1 && sups[sups.len() - 1] < sups[0] - stability;
            if improving {
                return Verdict::inconclusive(
                    win,
                    format!("lambda = {lambda}: grid exhausted while the excess still shrinks towards the edge"),
                );
            }
            Verdict::fails(win, first_cx.unwrap())
        })
        .collect();
    let mut out = Verdict::holds(win);
    let mut status = Status::Holds;
    let mut notes = Vec::new();
    for v in per_lambda {
        status = status.and(v.status);
        out.witness.extend(v.witness);
        if v.status == Status::Fails && out.counterexample.is_none() {
            out.counterexample = v.counterexample;
        }
        if let Some(n) = v.note {
            notes.push(n);
        }
    }
    out.status = status;
    if status != Status::Fails {
        out.counterexample = None;
    }
    if !notes.is_empty() {
        out.note = Some(notes.join("; "));
    }
    out
}

fn per_lambda_witness(f: &Fit, cond: MatrixCondition, lambda: f64, kappa: f64, sup: f64, win: Window) -> Verdict {
    let v = Verdict::holds(win).with(&format!("kappa@{lambda}"), kappa);
    match cond {
        MatrixCondition::C12L2R => v.with(&format!("H@{lambda}"), sup.exp()),
        MatrixCondition::C12L2B => {
            let mut v = v.with(&format!("H@{lambda}"), sup.exp());
            for c in [1.0f64, 2.0, 4.0] {
                let b = f
                    .pairs
                    .iter()
                    .map(|&(x, p, q)| x * (p + q) as f64 - p as f64 * c.ln() - (p + q) as f64 * sup)
                    .fold(0.0f64, f64::max);
                v = v.with(&format!("B@{lambda}(C={c})"), b.exp());
            }
            v
        }
        _ => v.with(&format!("A@{lambda}"), sup.max(0.0).exp()),
    }
}

fn monotone(m: &WeightMatrix, tol: f64) -> Verdict {
    let win = Window::new(0.0, m.truncation() as f64);
    for w in m.entries.windows(2) {
        let ((la, a), (lb, b)) = (&w[0], &w[1]);
        for (p, (x, y)) in a.logm().iter().zip(b.logm()).enumerate() {
            if !log_le(*x, *y, tol) {
                return Verdict::fails(
                    win,
                    Counterexample::at_index(p, *x, *y).with_label(format!("M^({la}) > M^({lb})")),
                );
            }
        }
    }
    Verdict::holds(win)
}

fn constant(m: &WeightMatrix, stability: f64) -> Verdict {
    let win = Window::new(1.0, m.truncation() as f64);
    let mut out = Verdict::holds(win);
    for w in m.entries.windows(2) {
        let ((la, a), (lb, b)) = (&w[0], &w[1]);
        let v = match seq_relate(a, b, Relation::Equiv, stability) {
            Ok(r) => r.verdict,
            Err(e) => Verdict::inconclusive(win, e.to_string()),
        };
        match v.status {
            Status::Holds => {
                if let (Some(c1), Some(c2)) = (v.witness("M<=N.C"), v.witness("N<=M.C")) {
                    out = out.with(&format!("C@{la}<={lb}"), c1).with(&format!("C@{lb}<={la}"), c2);
                }
            }
            Status::Fails => {
                let cx = v.counterexample.unwrap_or_else(|| Counterexample::at_index(0, 0.0, 0.0));
                return Verdict::fails(win, cx.with_label(format!("M^({la}) and M^({lb}) are not equivalent")));
            }
            Status::Inconclusive => {
                return Verdict::inconclusive(win, format!("equivalence of M^({la}) and M^({lb}) has not settled"))
            }
        }
    }
    out
}

fn standard_log_convex(m: &WeightMatrix) -> Verdict {
    let win = Window::new(1.0, m.truncation() as f64);
    let mut status = Status::Holds;
    let mut out = Verdict::holds(win);
    for (l, e) in &m.entries {
        let v = match check_lc(e) {
            Ok(v) => v,
            Err(_) => Verdict::inconclusive(win, format!("entry {l} is exotic")),
        };
        status = status.and(v.status);
        if v.status == Status::Fails && out.counterexample.is_none() {
            out.counterexample = v.counterexample.map(|c| c.with_label(format!("entry {l}")));
        }
        if v.status == Status::Inconclusive && out.note.is_none() {
            out.note = Some(format!("entry {l}: {}", v.note.unwrap_or_default()));
        }
    }
    out.status = status;
    if status != Status::Fails {
        out.counterexample = None;
    }
    out
}

/// Check a matrix regularity condition with grid-relative quantifiers.
pub fn check_matrix_condition(m: &WeightMatrix, cond: MatrixCondition, cfg: &RunConfig) -> Verdict {
    match cond {
        MatrixCondition::Monotone => monotone(m, cfg.tolerances.log_tol),
        MatrixCondition::Constant => constant(m, cfg.tolerances.stability),
        MatrixCondition::StandardLogConvex => standard_log_convex(m),
        _ => quantified(m, cond, cfg),
    }
}

/// Decide a matrix relation by resolving its quantifiers over both grids.
pub fn relate_matrices(m: &WeightMatrix, n: &WeightMatrix, rel: MatrixRelation, cfg: &RunConfig) -> Result<Verdict> {
    if m.truncation() != n.truncation() {
        return Err(Error::TruncationMismatch(m.truncation(), n.truncation()));
    }
    let stability = cfg.tolerances.stability;
    let win = Window::new(1.0, m.truncation() as f64);
    let relate = |a: &LogSequence, b: &LogSequence, r: Relation| seq_relate(a, b, r, stability).map(|x| x.verdict);
    let mut out = Verdict::holds(win);
    let mut status = Status::Holds;
    let mut notes = Vec::new();
    match rel {
        MatrixRelation::Strong => {
            for (l, a) in &m.entries {
                for (k, b) in &n.entries {
                    let v = relate(a, b, Relation::Triangleleft)?;
                    status = status.and(v.status);
                    if v.status == Status::Fails && out.counterexample.is_none() {
                        out.counterexample =
                            v.counterexample.map(|c| c.with_label(format!("M^({l}) vs N^({k}): root ratio stays finite")));
                    }
                    if v.status == Status::Inconclusive {
                        notes.push(format!("M^({l}) vs N^({k}) unsettled"));
                    }
                }
            }
        }
        MatrixRelation::Roumieu | MatrixRelation::Beurling => {
            let (outer, inner, dir) = match rel {
                MatrixRelation::Roumieu => (m, n, Search::Up),
                _ => (n, m, Search::Down),
            };
            let grid = inner.lambdas();
            for (l, fixed) in &outer.entries {
                let mut found = false;
                let mut unclear = false;
                let mut first_cx = None;
                for ki in candidates(&grid, *l, dir) {
                    let (k, other) = (&inner.entries[ki].0, &inner.entries[ki].1);
                    let v = match rel {
                        MatrixRelation::Roumieu => relate(fixed, other, Relation::Preceq)?,
                        _ => relate(other, fixed, Relation::Preceq)?,
                    };
                    match v.status {
                        Status::Holds => {
                            out = out.with(&format!("kappa@{l}"), *k).with(&format!("C@{l}"), v.witness("C").unwrap_or(1.0));
                            found = true;
                            break;
                        }
                        Status::Fails => {
                            first_cx.get_or_insert(v.counterexample.map(|c| c.with_label(format!("lambda = {l}, kappa = {k}"))));
                        }
                        Status::Inconclusive => unclear = true,
                    }
                }
                if !found {
                    if unclear {
                        status = status.and(Status::Inconclusive);
                        notes.push(format!("lambda = {l}: grid exhausted without a settled kappa"));
                    } else {
                        status = status.and(Status::Fails);
                        if out.counterexample.is_none() {
                            out.counterexample = first_cx.flatten();
                        }
                    }
                }
            }
        }
    }
    out.status = status;
    if status != Status::Fails {
        out.counterexample = None;
    } else if out.counterexample.is_none() {
        out.counterexample = Some(Counterexample::at_index(m.truncation(), 0.0, 0.0).with_label("relation fails"));
    }
    if !notes.is_empty() {
        out.note = Some(notes.join("; "));
    }
    Ok(out)
}

/// Roumieu: some entry is non-quasianalytic; Beurling: every entry is.
/// Entries with `+inf` tails have a finite series and count as convergent.
pub fn matrix_nqa(m: &WeightMatrix, case: Case) -> Verdict {
    let win = Window::new(1.0, m.truncation() as f64);
    let per: Vec<(f64, Verdict)> = m
        .entries
        .par_iter()
        .map(|(l, e)| {
            let v = if e.is_exotic() {
                Verdict::holds(win).with("exotic", 1.0)
            } else {
                check_sequence_condition(e, SeqCondition::NonQuasianalytic)
                    .unwrap_or_else(|err| Verdict::inconclusive(win, err.to_string()))
            };
            (*l, v)
        })
        .collect();
    let mut out = Verdict::holds(win);
    match case {
        Case::Roumieu => {
            if let Some((l, _)) = per.iter().find(|(_, v)| v.status == Status::Holds) {
                return out.with("lambda", *l);
            }
            if per.iter().any(|(_, v)| v.status == Status::Inconclusive) {
                return Verdict::inconclusive(win, "no entry settles as non-quasianalytic");
            }
            let (l, v) = &per[per.len() - 1];
            let cx = v.counterexample.clone().unwrap_or_else(|| Counterexample::at_index(m.truncation(), 0.0, 0.0));
            Verdict::fails(win, cx.with_label(format!("every entry diverges; largest lambda = {l}")))
        }
        Case::Beurling => {
            for (l, v) in &per {
                match v.status {
                    Status::Holds => {}
                    Status::Fails => {
                        let cx = v.counterexample.clone().unwrap_or_else(|| Counterexample::at_index(m.truncation(), 0.0, 0.0));
                        return Verdict::fails(win, cx.with_label(format!("entry {l} is quasianalytic")));
                    }
                    Status::Inconclusive => out = Verdict::inconclusive(win, format!("entry {l} is borderline")),
                }
            }
            out
        }
    }
}
