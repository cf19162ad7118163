//! Weighted sup-norms on coefficient sequences indexed by `k = |α|`, and the
//! witness-sequence argument turning a norm bound into a bound between
//! weight functions.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assocfn::{classify_triviality, t_hi, Case, Triviality, WeightFn};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::matrices::WeightMatrix;
use crate::trend::{self, Scale, SupTrend};
use crate::verdict::{Counterexample, Status, Verdict, Window};
use crate::weightspec::WeightSpec;

/// Indices up to this bound are visited one by one; beyond it the support
/// is subsampled logarithmically.
const DENSE_LIMIT: u64 = 10_000;
const SPARSE_PER_DECADE: f64 = 2000.0;
const MAX_L: u32 = 16;
const MAX_LOG_C: f64 = 50.0;

#[derive(Debug, Clone)]
pub enum CoefficientFamily {
    Explicit { values: Vec<f64> },
    /// `c_k = exp(−w(√k · scale))` for `k ≤ support`.
    WeightWitness { weight: WeightFn, scale: f64, support: u64 },
    /// `c_k = δ_{i,k}`.
    Kronecker { i: u64 },
}

/// JSON form of a [`CoefficientFamily`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub kind: CoefficientKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    Explicit,
    WeightWitness,
    Kronecker,
}

impl CoefficientFile {
    pub fn family(&self, cfg: &RunConfig) -> Result<CoefficientFamily> {
        let missing = |f: &str| Error::InvalidParameter(format!("{:?} coefficients need {f:?}", self.kind));
        match self.kind {
            CoefficientKind::Explicit => {
                let values = self.values.clone().ok_or_else(|| missing("values"))?;
                CoefficientFamily::explicit(values)
            }
            CoefficientKind::Kronecker => Ok(CoefficientFamily::Kronecker { i: self.i.ok_or_else(|| missing("i"))? }),
            CoefficientKind::WeightWitness => {
                let w = self.weight.as_ref().ok_or_else(|| missing("weight"))?.weight(cfg)?;
                let scale = self.scale.unwrap_or(1.0);
                if !(scale.is_finite() && scale > 0.0) {
                    return Err(Error::InvalidParameter(format!("witness scale {scale} must be positive")));
                }
                Ok(CoefficientFamily::WeightWitness { weight: w, scale, support: self.support.unwrap_or(cfg.norm_support) })
            }
        }
    }
}

impl CoefficientFamily {
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be finite".into()));
        }
        Ok(CoefficientFamily::Explicit { values })
    }

    /// `c_k = exp(−w(√k))` on `k ≤ support`.
    pub fn witness(weight: WeightFn, support: u64) -> Self {
        CoefficientFamily::WeightWitness { weight, scale: 1.0, support }
    }

    /// Largest index carrying a coefficient.
    pub fn support(&self) -> u64 {
        match self {
            CoefficientFamily::Explicit { values } => values.len().saturating_sub(1) as u64,
            CoefficientFamily::WeightWitness { support, .. } => *support,
            CoefficientFamily::Kronecker { i } => *i,
        }
    }

    /// `(k, log|c_k|)` over the visited indices.
    fn terms(&self) -> Vec<(u64, f64)> {
        match self {
            CoefficientFamily::Explicit { values } => {
                values.iter().enumerate().map(|(k, v)| (k as u64, v.abs().ln())).collect()
            }
            CoefficientFamily::Kronecker { i } => vec![(*i, 0.0)],
            CoefficientFamily::WeightWitness { weight, scale, support } => {
                index_grid(*support).into_par_iter().map(|k| (k, -weight.eval((k as f64).sqrt() * scale))).collect()
            }
        }
    }

    /// Multiply every coefficient by `r`.
    pub fn scaled(&self, r: f64) -> Result<Self> {
        match self {
            CoefficientFamily::Explicit { values } => CoefficientFamily::explicit(values.iter().map(|v| v * r).collect()),
            _ => Err(Error::InvalidParameter("only explicit coefficients can be rescaled".into())),
        }
    }
}

/// All `k ≤ DENSE_LIMIT`, then a logarithmic sample ending at `support`.
fn index_grid(support: u64) -> Vec<u64> {
    let mut ks: Vec<u64> = (0..=support.min(DENSE_LIMIT)).collect();
    if support > DENSE_LIMIT {
        let (a, b) = ((DENSE_LIMIT as f64).ln(), (support as f64).ln());
        let steps = ((b - a) / std::f64::consts::LN_10 * SPARSE_PER_DECADE).ceil() as usize;
        for i in 1..=steps {
            let k = ((a + (b - a) * i as f64 / steps as f64).exp().round() as u64).min(support);
            if k > *ks.last().unwrap() {
                ks.push(k);
            }
        }
        if *ks.last().unwrap() != support {
            ks.push(support);
        }
    }
    ks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", content = "j", rename_all = "lowercase")]
pub enum NormMode {
    Roumieu(u32),
    Beurling(u32),
}

impl NormMode {
    pub fn new(case: Case, j: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidParameter("norm index j must be at least 1".into()));
        }
        Ok(match case {
            Case::Roumieu => NormMode::Roumieu(j),
            Case::Beurling => NormMode::Beurling(j),
        })
    }

    fn j(self) -> u32 {
        match self {
            NormMode::Roumieu(j) | NormMode::Beurling(j) => j,
        }
    }
}

impl fmt::Display for NormMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormMode::Roumieu(j) => write!(f, "roumieu:{j}"),
            NormMode::Beurling(j) => write!(f, "beurling:{j}"),
        }
    }
}

impl FromStr for NormMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (case, j) = s.split_once(':').ok_or_else(|| Error::InvalidParameter(format!("norm mode {s:?}: expected case:j")))?;
        let j = j.parse().map_err(|_| Error::InvalidParameter(format!("norm mode {s:?}: bad index")))?;
        NormMode::new(case.parse()?, j)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub mode: NormMode,
    #[serde(with = "crate::ext::scalar")]
    pub log_value: f64,
    #[serde(with = "crate::ext::scalar")]
    pub value: f64,
    /// Index attaining the supremum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<u64>,
    /// The terms are still rising at the end of the support.
    pub tail_increasing: bool,
    /// For Beurling norms: whether `ω(t) = o(t²)` looked true on the probe.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub small_o_square: Option<Status>,
}

fn sup_of(mode: NormMode, terms: &[(u64, f64)], exponent: impl Fn(f64) -> f64 + Sync) -> NormValue {
    let xs: Vec<f64> = terms
        .par_iter()
        .map(|&(k, lc)| if lc == f64::NEG_INFINITY { lc } else { lc + exponent((k as f64).sqrt()) })
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut argmax = None;
    for (i, &x) in xs.iter().enumerate() {
        if x > best {
            best = x;
            argmax = Some(terms[i].0);
        }
    }
    let n = xs.len();
    let tail_increasing = n >= 2 && xs[n - 1] > xs[n - 2] && argmax == Some(terms[n - 1].0);
    NormValue { mode, log_value: best, value: best.exp(), argmax, tail_increasing, small_o_square: None }
}

/// `sup_k |c_k| e^{(1/j) w(√k/j)}` (Roumieu) or `sup_k |c_k| e^{j w(√k j)}` (Beurling).
pub fn lambda_norm(c: &CoefficientFamily, w: &WeightFn, mode: NormMode, cfg: &RunConfig) -> NormValue {
    let terms = c.terms();
    let jf = mode.j() as f64;
    match mode {
        NormMode::Roumieu(_) => {
            let inv = 1.0 / jf;
            sup_of(mode, &terms, |r| inv * w.eval(r * inv))
        }
        NormMode::Beurling(_) => {
            let mut v = sup_of(mode, &terms, |r| jf * w.eval(r * jf));
            v.small_o_square = Some(match classify_triviality(w, Case::Beurling, cfg).verdict {
                Triviality::Nontrivial => Status::Holds,
                Triviality::Trivial => Status::Fails,
                Triviality::Unknown => Status::Inconclusive,
            });
            v
        }
    }
}

/// Norm with `ω_{M^{(l)}}(√k/l)` (Roumieu) or `ω_{M^{(1/l)}}(√k l)` (Beurling).
pub fn matrix_norm(c: &CoefficientFamily, m: &WeightMatrix, mode: NormMode) -> Result<NormValue> {
    let l = mode.j() as f64;
    let lambda = match mode {
        NormMode::Roumieu(_) => l,
        NormMode::Beurling(_) => 1.0 / l,
    };
    let entry = m
        .entry(lambda)
        .ok_or_else(|| Error::InvalidParameter(format!("matrix {} has no entry at lambda = {lambda}", m.name())))?;
    let w = WeightFn::associated(entry.clone());
    let terms = c.terms();
    Ok(match mode {
        NormMode::Roumieu(_) => {
            let inv = 1.0 / l;
            sup_of(mode, &terms, |r| w.eval(r * inv))
        }
        NormMode::Beurling(_) => sup_of(mode, &terms, |r| w.eval(r * l)),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominationAttempt {
    pub l: u32,
    #[serde(with = "crate::ext::scalar")]
    pub log_norm: f64,
    pub tail_increasing: bool,
    pub outcome: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominationReport {
    pub w: String,
    pub v: String,
    /// Holds with witnesses `l`, `C`, `C1`, `a`, `b` for `v ≤ a w + b`.
    pub verdict: Verdict,
    pub attempts: Vec<DominationAttempt>,
}

/// From `e^{−w(√k)} ≤ C e^{−(1/l) v(√k/l)}` derive `v(h) ≤ l log C + l w(l h)`
/// and, with `w(l h) ≤ C₁ (w(h) + 1)`, the affine bound `v ≤ a w + b`.
pub fn empirical_domination(w: &WeightFn, v: &WeightFn, cfg: &RunConfig) -> DominationReport {
    let witness = CoefficientFamily::witness(w.clone(), cfg.norm_support);
    let hi = t_hi(w, cfg).min(t_hi(v, cfg)).max(100.0);
    let probe = cfg.log_grid(10.0, hi);
    let win = Window::new(10.0, hi);
    let stability = cfg.tolerances.stability;
    let mut attempts = Vec::new();
    for l in 1..=MAX_L {
        let norm = lambda_norm(&witness, v, NormMode::Roumieu(l), cfg);
        let mut attempt = DominationAttempt {
            l,
            log_norm: norm.log_value,
            tail_increasing: norm.tail_increasing,
            outcome: String::new(),
        };
        if norm.tail_increasing || !(norm.log_value <= MAX_LOG_C) {
            attempt.outcome = "norm bound not found within the support".into();
            attempts.push(attempt);
            continue;
        }
        let log_c = norm.log_value.max(0.0);
        let lf = l as f64;
        let c1 = if l == 1 {
            1.0
        } else {
            cfg.log_grid(1.0, (hi / lf).max(10.0))
                .iter()
                .map(|&h| w.eval(lf * h) / (w.eval(h) + 1.0))
                .fold(1.0, f64::max)
        };
        let (a, b) = if l == 1 { (1.0, log_c) } else { (lf * c1, lf * log_c + lf * c1) };
        let gaps: Vec<f64> = probe.par_iter().map(|&h| v.eval(h).ln() - (a * w.eval(h) + b).ln()).collect();
        let worst = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let settled = matches!(trend::classify_sup(&gaps, Scale::Log, stability), SupTrend::Bounded { .. });
        if worst <= cfg.tolerances.log_tol && settled {
            attempt.outcome = "affine bound holds on the probe".into();
            attempts.push(attempt);
            let verdict = Verdict::holds(win)
                .with("l", lf)
                .with("C", log_c.exp())
                .with("C1", c1)
                .with("a", a)
                .with("b", b)
                .with("max_log_gap", worst);
            return DominationReport { w: w.label(), v: v.label(), verdict, attempts };
        }
        attempt.outcome = if settled { "affine bound violated".into() } else { "v / (a w + b) keeps growing".into() };
        attempts.push(attempt);
    }
    let verdict = Verdict::fails(
        win,
        Counterexample::at_argument(hi, MAX_L as f64, MAX_LOG_C).with_label(format!("no (l, C) with l <= {MAX_L}, log C <= {MAX_LOG_C}")),
    );
    DominationReport { w: w.label(), v: v.label(), verdict, attempts }
}
