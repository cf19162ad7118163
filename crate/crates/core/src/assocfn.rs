//! Weight functions, associated weight functions `ω_M(t) = sup_p log(t^p / M_p)`,
//! recovery of a sequence from a weight, and the weight-function conditions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::legendre::LegendreGrid;
use crate::seqcore::{LogSequence, Provenance};
use crate::trend::{self, LimitTrend, Scale, SeriesTrend, SupTrend};
use crate::verdict::{Counterexample, Verdict, Window};

#[derive(Debug, Clone)]
pub enum WeightKind {
    /// `ω(t) = t^a`.
    Power { a: f64 },
    /// `ω(t) = log(1 + t)`.
    ShiftedLog,
    /// `ω(t) = max(0, log t)`.
    TruncLog,
    /// `ω_M` of a weight sequence.
    Associated { sequence: Arc<LogSequence>, log_convex: bool },
    /// Piecewise linear in `t` through the samples, constant outside them.
    Sampled { t: Vec<f64>, values: Vec<f64> },
}

/// A weight function on `[0, inf)`. With `normalized` set the function is
/// clamped to zero on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct WeightFn {
    kind: WeightKind,
    normalized: bool,
}

/// Value of `ω_M(t)` with the maximizing index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaValue {
    pub value: f64,
    pub argmax: usize,
    /// The maximum sits at the truncation index, so the true supremum over
    /// all `p` may be larger.
    pub saturated: bool,
}

fn is_log_convex(m: &LogSequence) -> bool {
    let mu = m.logmu();
    (2..mu.len()).all(|p| mu[p] >= mu[p - 1])
}

/// `ω_M(t) = max_{0≤p≤P} (p log t − log M_p)`.
pub fn omega_of_sequence(m: &LogSequence, t: f64) -> Result<OmegaValue> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("omega_M needs t >= 0, got {t}")));
    }
    Ok(omega_at_log(m, t.ln(), is_log_convex(m)))
}

fn omega_at_log(m: &LogSequence, y: f64, log_convex: bool) -> OmegaValue {
    let l = m.logm();
    let last = m.first_infinite().map_or(l.len() - 1, |i| i - 1);
    if y == f64::NEG_INFINITY {
        return OmegaValue { value: -l[0], argmax: 0, saturated: false };
    }
    let (argmax, value) = if log_convex {
        let mu = &m.logmu()[1..=last];
        let p = mu.partition_point(|&x| x < y);
        (p, p as f64 * y - l[p])
    } else {
        let mut best = (0, -l[0]);
        for (p, &lp) in l.iter().enumerate().take(last + 1).skip(1) {
            let v = p as f64 * y - lp;
            if v > best.1 {
                best = (p, v);
            }
        }
        best
    };
    OmegaValue { value, argmax, saturated: argmax == m.truncation() }
}

impl WeightFn {
    pub fn power(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidWeight(format!("power exponent must be positive, got {a}")));
        }
        Ok(WeightFn { kind: WeightKind::Power { a }, normalized: false })
    }

    pub fn shifted_log() -> Self {
        WeightFn { kind: WeightKind::ShiftedLog, normalized: false }
    }

    pub fn trunc_log() -> Self {
        WeightFn { kind: WeightKind::TruncLog, normalized: false }
    }

    pub fn associated(m: LogSequence) -> Self {
        Self::associated_arc(Arc::new(m))
    }

    pub fn associated_arc(m: Arc<LogSequence>) -> Self {
        let log_convex = is_log_convex(&m);
        WeightFn { kind: WeightKind::Associated { sequence: m, log_convex }, normalized: false }
    }

    pub fn sampled(t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if t.is_empty() || t.len() != values.len() {
            return Err(Error::InvalidWeight("sampled weight needs equally many arguments and values".into()));
        }
        if t[0] < 0.0 || t.iter().any(|x| !x.is_finite()) || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidWeight("sample arguments must be finite, nonnegative and increasing".into()));
        }
        if values.iter().any(|v| v.is_nan()) || values[0] < 0.0 {
            return Err(Error::InvalidWeight("sample values must be nonnegative and not NaN".into()));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidWeight(format!("sample values decrease at t = {}", t[i + 1])));
        }
        Ok(WeightFn { kind: WeightKind::Sampled { t, values }, normalized: false })
    }

    pub fn normalized(mut self) -> Self {
        self.normalized = true;
        self
    }

    pub fn with_normalization(mut self, flag: bool) -> Self {
        self.normalized = flag;
        self
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// Short human-readable description.
    pub fn label(&self) -> String {
        let base = match &self.kind {
            WeightKind::Power { a } => format!("t^{a}"),
            WeightKind::ShiftedLog => "log1p".into(),
            WeightKind::TruncLog => "logtrunc".into(),
            WeightKind::Associated { sequence, .. } => format!("assoc:{}", sequence.name()),
            WeightKind::Sampled { t, .. } => format!("sampled[{}]", t.len()),
        };
        if self.normalized {
            format!("{base} (normalized)")
        } else {
            base
        }
    }

    /// Largest argument at which the function is a faithful model: for an
    /// associated function of a truncated sequence this is `μ_P`, beyond
    /// which only the last term of the supremum is seen.
    pub fn reliable_limit(&self) -> f64 {
        match &self.kind {
            WeightKind::Associated { sequence, .. } => match sequence.first_infinite() {
                Some(_) => f64::INFINITY,
                None => sequence.logmu()[sequence.truncation()].exp(),
            },
            WeightKind::Sampled { t, .. } => *t.last().unwrap(),
            _ => f64::INFINITY,
        }
    }

    fn raw(&self, t: f64) -> f64 {
        match &self.kind {
            WeightKind::Power { a } => t.powf(*a),
            WeightKind::ShiftedLog => t.ln_1p(),
            WeightKind::TruncLog => t.ln().max(0.0),
            WeightKind::Associated { sequence, log_convex } => omega_at_log(sequence, t.ln(), *log_convex).value,
            WeightKind::Sampled { t: ts, values } => interpolate(ts, values, t),
        }
    }

    fn raw_phi(&self, y: f64) -> f64 {
        match &self.kind {
            WeightKind::Power { a } => (a * y).exp(),
            WeightKind::ShiftedLog => {
                if y > 0.0 {
                    y + (-y).exp().ln_1p()
                } else {
                    y.exp().ln_1p()
                }
            }
            WeightKind::TruncLog => y.max(0.0),
            WeightKind::Associated { sequence, log_convex } => omega_at_log(sequence, y, *log_convex).value,
            WeightKind::Sampled { .. } => self.raw(y.exp()),
        }
    }

    /// `ω(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        if self.normalized && t <= 1.0 {
            return 0.0;
        }
        self.raw(t)
    }

    /// `φ_ω(y) = ω(e^y)`.
    pub fn phi(&self, y: f64) -> f64 {
        if self.normalized && y <= 0.0 {
            return 0.0;
        }
        self.raw_phi(y)
    }

    /// `ω` on every point of `ts`, evaluated in parallel.
    pub fn eval_many(&self, ts: &[f64]) -> Vec<f64> {
        ts.par_iter().map(|&t| self.eval(t)).collect()
    }

    /// Samples `(t, ω(t))` on the configured grid.
    pub fn curve(&self, cfg: &RunConfig) -> Vec<(f64, f64)> {
        let ts = cfg.t_grid();
        let vs = self.eval_many(&ts);
        ts.into_iter().zip(vs).collect()
    }
}

fn interpolate(ts: &[f64], vs: &[f64], t: f64) -> f64 {
    let i = ts.partition_point(|&x| x <= t);
    if i == 0 {
        return vs[0];
    }
    if i == ts.len() {
        return vs[ts.len() - 1];
    }
    let (t0, t1, v0, v1) = (ts[i - 1], ts[i], vs[i - 1], vs[i]);
    if v1 == f64::INFINITY {
        return if t == t0 { v0 } else { f64::INFINITY };
    }
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// TSV rows `t \t w(t)` in shortest round-trip notation.
pub fn curve_to_tsv(rows: &[(f64, f64)]) -> String {
    let mut out = String::new();
    for (t, v) in rows {
        out.push_str(&format!("{t}\t{v}\n"));
    }
    out
}

/// Parse a TSV curve into a sampled weight. Blank lines and lines starting
/// with `#` are skipped.
pub fn sampled_from_tsv(text: &str) -> Result<WeightFn> {
    let mut t = Vec::new();
    let mut v = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let (a, b) = match (cols.next(), cols.next(), cols.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(Error::InvalidWeight(format!("line {}: expected two tab-separated columns", n + 1))),
        };
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidWeight(format!("line {}: cannot parse number {s:?}", n + 1)))
        };
        t.push(parse(a)?);
        v.push(parse(b)?);
    }
    WeightFn::sampled(t, v)
}

/// Recover `log M_p = sup_{t≥0} (p log t − ω(t))` for `p = 0..=P`.
///
/// Entries whose supremum is unbounded along the grid are `+inf`, which
/// produces an exotic sequence.
pub fn sequence_of_omega(w: &WeightFn, truncation: usize, cfg: &RunConfig) -> Result<LogSequence> {
    if truncation < 8 {
        return Err(Error::InvalidParameter(format!("truncation {truncation} < 8")));
    }
    let phi = |y: f64| w.phi(y);
    let per_unit = cfg.points_per_decade as f64 / std::f64::consts::LN_10;
    let grid = LegendreGrid::new(&phi, cfg.t_min.ln(), cfg.t_max.ln(), per_unit, truncation as f64);
    let mut logm: Vec<f64> = (0..=truncation).into_par_iter().map(|p| grid.conjugate(p as f64).0).collect();
    logm[0] = logm[0].max(-w.eval(0.0));
    if let Some(i) = logm.iter().position(|x| *x == f64::INFINITY) {
        logm[i..].iter_mut().for_each(|x| *x = f64::INFINITY);
    }
    LogSequence::new(format!("seq({})", w.label()), Provenance::Weight { lambda: None }, logm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightCondition {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Omega6,
    Om7,
    OmegaNqa,
}

impl WeightCondition {
    pub const ALL: [WeightCondition; 7] = [
        WeightCondition::Alpha,
        WeightCondition::Beta,
        WeightCondition::Gamma,
        WeightCondition::Delta,
        WeightCondition::Omega6,
        WeightCondition::Om7,
        WeightCondition::OmegaNqa,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            WeightCondition::Alpha => "alpha",
            WeightCondition::Beta => "beta",
            WeightCondition::Gamma => "gamma",
            WeightCondition::Delta => "delta",
            WeightCondition::Omega6 => "omega6",
            WeightCondition::Om7 => "om7",
            WeightCondition::OmegaNqa => "omega_nqa",
        }
    }
}

impl fmt::Display for WeightCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WeightCondition::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown weight condition {s:?}")))
    }
}

/// Upper end of the probe grid for `w`.
pub(crate) fn t_hi(w: &WeightFn, cfg: &RunConfig) -> f64 {
    cfg.t_max.min(w.reliable_limit())
}

pub(crate) fn trend_grid(w: &WeightFn, cfg: &RunConfig) -> Vec<f64> {
    let hi = t_hi(w, cfg).max(TREND_START * 10.0);
    cfg.log_grid(TREND_START, hi)
}

/// Left end of every asymptotic probe.
const TREND_START: f64 = 10.0;

pub fn check_weight_condition(w: &WeightFn, cond: WeightCondition, cfg: &RunConfig) -> Verdict {
    let stability = cfg.tolerances.stability;
    match cond {
        WeightCondition::Alpha => alpha(w, cfg, stability),
        WeightCondition::Beta => beta(w, cfg, stability),
        WeightCondition::Gamma => gamma(w, cfg, stability),
        WeightCondition::Delta => delta(w, cfg),
        WeightCondition::Omega6 => omega6(w, cfg),
        WeightCondition::Om7 => om7(w, cfg, stability),
        WeightCondition::OmegaNqa => omega_nqa(w, cfg),
    }
}

fn alpha(w: &WeightFn, cfg: &RunConfig, stability: f64) -> Verdict {
    let hi = t_hi(w, cfg) / 2.0;
    let ratio = |t: f64| w.eval(2.0 * t) / (w.eval(t) + 1.0);
    let full: Vec<f64> = cfg.log_grid(cfg.t_min, hi).into_par_iter().map(ratio).collect();
    let ts = cfg.log_grid(TREND_START, hi);
    let xs: Vec<f64> = ts.par_iter().map(|&t| ratio(t)).collect();
    let win = Window::new(cfg.t_min, hi);
    match trend::classify_sup(&xs, Scale::Linear, stability) {
        SupTrend::Bounded { .. } => {
            let l = full.iter().copied().fold(1.0, f64::max);
            Verdict::holds(win).with("L", l)
        }
        SupTrend::Unbounded { argmax, value, candidate } => Verdict::fails(
            win,
            Counterexample::at_argument(ts[argmax], value, candidate).with_label("omega(2t)/(omega(t)+1)"),
        ),
        SupTrend::Unclear { sup, .. } => {
            Verdict::inconclusive(win, "omega(2t)/(omega(t)+1) has not settled").with("L_estimate", sup)
        }
    }
}

fn log_ratio_to_square(w: &WeightFn, ts: &[f64]) -> Vec<f64> {
    ts.par_iter().map(|&t| w.eval(t).ln() - 2.0 * t.ln()).collect()
}

fn beta(w: &WeightFn, cfg: &RunConfig, stability: f64) -> Verdict {
    let ts = trend_grid(w, cfg);
    let xs = log_ratio_to_square(w, &ts);
    let win = Window::new(ts[0], *ts.last().unwrap());
    match trend::classify_sup(&xs, Scale::Log, stability) {
        SupTrend::Bounded { sup, .. } => Verdict::holds(win).with("C", sup.exp()),
        SupTrend::Unbounded { argmax, value, candidate } => Verdict::fails(
            win,
            Counterexample::at_argument(ts[argmax], value.exp(), candidate.exp()).with_label("omega(t)/t^2"),
        ),
        SupTrend::Unclear { sup, .. } => {
            Verdict::inconclusive(win, "omega(t)/t^2 has not settled").with("C_estimate", sup.exp())
        }
    }
}

fn gamma(w: &WeightFn, cfg: &RunConfig, stability: f64) -> Verdict {
    let ts = trend_grid(w, cfg);
    let xs: Vec<f64> = ts.par_iter().map(|&t| (w.eval(t) / t.ln()).ln()).collect();
    let win = Window::new(ts[0], *ts.last().unwrap());
    let n = xs.len();
    match trend::classify_to_pos_inf(&xs, Scale::Log, stability) {
        LimitTrend::Diverges { last, .. } => Verdict::holds(win).with("final_ratio", last.exp()),
        LimitTrend::Finite { inf, .. } => {
            let sup = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Verdict::fails(
                win,
                Counterexample::at_argument(ts[n - 1], xs[n - 1].exp(), sup.exp())
                    .with_label("omega(t)/log t stays bounded"),
            )
            .with("limsup_estimate", sup.exp())
            .with("liminf_estimate", inf.exp())
        }
        LimitTrend::Unclear => Verdict::inconclusive(win, "omega(t)/log t neither settles nor grows steadily")
            .with("final_ratio", xs[n - 1].exp()),
    }
}

fn delta(w: &WeightFn, cfg: &RunConfig) -> Verdict {
    let hi = t_hi(w, cfg).ln();
    let h = std::f64::consts::LN_10 / cfg.points_per_decade as f64;
    let n = (hi / h).ceil() as usize;
    let ys: Vec<f64> = (0..=n).map(|i| hi * i as f64 / n as f64).collect();
    let f: Vec<f64> = ys.par_iter().map(|&y| w.phi(y)).collect();
    let win = Window::new(1.0, hi.exp());
    let mut min_d2 = f64::INFINITY;
    for i in 1..n {
        if !f[i + 1].is_finite() {
            break;
        }
        let d2 = f[i - 1] - 2.0 * f[i] + f[i + 1];
        let scale = 1f64.max(f[i - 1].abs() + 2.0 * f[i].abs() + f[i + 1].abs());
        if d2 < -cfg.tolerances.log_tol * scale {
            return Verdict::fails(
                win,
                Counterexample::at_argument(ys[i].exp(), 2.0 * f[i], f[i - 1] + f[i + 1])
                    .with_label("phi(y-h) - 2 phi(y) + phi(y+h) < 0"),
            );
        }
        min_d2 = min_d2.min(d2);
    }
    Verdict::holds(win).with("min_second_difference", min_d2)
}

const OMEGA6_MAX_K: i32 = 20;

/// First `t` of `ts` (restricted to `H t ≤ hi`) violating `2ω(t) ≤ ω(Ht) + H`.
fn omega6_violation(w: &WeightFn, ts: &[f64], h: f64, hi: f64) -> Option<(f64, f64, f64)> {
    ts.iter().take_while(|&&t| h * t <= hi).find_map(|&t| {
        let lhs = 2.0 * w.eval(t);
        let rhs = w.eval(h * t) + h;
        (lhs - rhs > 1e-9 * lhs.abs().max(1.0)).then_some((t, lhs, rhs))
    })
}

fn omega6_min_h(w: &WeightFn, ts: &[f64], hi: f64) -> Option<i32> {
    (0..=OMEGA6_MAX_K).find(|&k| omega6_violation(w, ts, 2f64.powi(k), hi).is_none())
}

fn omega6(w: &WeightFn, cfg: &RunConfig) -> Verdict {
    let hi = t_hi(w, cfg);
    let ts = cfg.log_grid(cfg.t_min, hi);
    let n = ts.len();
    let win = Window::new(cfg.t_min, hi);
    let q = omega6_min_h(w, &ts[..n / 4], hi);
    let half = omega6_min_h(w, &ts[..n / 2], hi);
    let full = omega6_min_h(w, &ts, hi);
    let fmt_h = |k: Option<i32>| k.map_or(f64::INFINITY, |k| 2f64.powi(k));
    match (q, half, full) {
        (_, Some(kh), Some(kf)) if kh == kf => Verdict::holds(win).with("H", 2f64.powi(kf)),
        (Some(kq), Some(kh), kf) if kq < kh && kf.is_none_or(|kf| kh < kf) => {
            let h = 2f64.powi(kh);
            let (t, lhs, rhs) = omega6_violation(w, &ts, h, hi).expect("half-window H fails on the full window");
            Verdict::fails(win, Counterexample::at_argument(t, lhs, rhs).with_label(format!("2 omega(t) <= omega({h} t) + {h}")))
                .with("H_quarter", fmt_h(q))
                .with("H_half", fmt_h(half))
                .with("H_full", fmt_h(full))
        }
        _ => Verdict::inconclusive(win, "minimal H neither stable nor steadily growing")
            .with("H_quarter", fmt_h(q))
            .with("H_half", fmt_h(half))
            .with("H_full", fmt_h(full)),
    }
}

fn om7(w: &WeightFn, cfg: &RunConfig, stability: f64) -> Verdict {
    let reliable = w.reliable_limit();
    let hi = cfg.t_max.min(reliable.sqrt());
    let mut first_unbounded = None;
    let mut all_unbounded = true;
    for k in 0..=10 {
        let h = 2f64.powi(k);
        let top = hi.min(reliable / h);
        if top < TREND_START * 10.0 {
            all_unbounded = false;
            break;
        }
        let ts = cfg.log_grid(TREND_START, top);
        let xs: Vec<f64> = ts.par_iter().map(|&t| (w.eval(t * t) / (w.eval(h * t) + 1.0)).ln()).collect();
        let win = Window::new(ts[0], top);
        match trend::classify_sup(&xs, Scale::Log, stability) {
            SupTrend::Bounded { sup, .. } => return Verdict::holds(win).with("H", h).with("C", sup.exp().max(1.0)),
            SupTrend::Unbounded { argmax, value, candidate } => {
                if first_unbounded.is_none() {
                    first_unbounded = Some((win, ts[argmax], value.exp(), candidate.exp()));
                }
            }
            SupTrend::Unclear { .. } => all_unbounded = false,
        }
    }
    let win = Window::new(TREND_START, hi);
    match first_unbounded {
        Some((win, t, v, c)) if all_unbounded => {
            Verdict::fails(win, Counterexample::at_argument(t, v, c).with_label("omega(t^2)/(omega(t)+1)"))
        }
        _ => Verdict::inconclusive(win, "no H in 1..1024 gives a settled ratio"),
    }
}

fn omega_nqa(w: &WeightFn, cfg: &RunConfig) -> Verdict {
    let hi = t_hi(w, cfg);
    let ts = cfg.log_grid(1.0, hi);
    let vs = w.eval_many(&ts);
    let lt: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let terms: Vec<f64> = vs.iter().zip(&lt).map(|(v, l)| v.ln() - 2.0 * l).collect();
    let mut integral = 0.0;
    for i in 1..ts.len() {
        let a = vs[i - 1] / ts[i - 1];
        let b = vs[i] / ts[i];
        integral += 0.5 * (a + b) * (lt[i] - lt[i - 1]);
    }
    let win = Window::new(1.0, hi);
    let (trend, slope, ratio) = trend::classify_series_weighted(&lt, &terms, Some(&lt), 0.1);
    match trend {
        SeriesTrend::Convergent => Verdict::holds(win).with("partial_integral", integral).with("tail_slope", slope),
        SeriesTrend::Divergent => {
            let n = ts.len();
            Verdict::fails(
                win,
                Counterexample::at_argument(hi, integral, integral - 0.5 * (vs[n - 1] / ts[n - 1]) * (lt[n - 1] - lt[n / 2]))
                    .with_label("integral of omega(t)/t^2 keeps growing"),
            )
            .with("tail_slope", slope)
        }
        SeriesTrend::Unclear => Verdict::inconclusive(win, "borderline integrand decay")
            .with("partial_integral", integral)
            .with("tail_slope", slope)
            .with("condensation_ratio", ratio),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Beurling,
    Roumieu,
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "beurling" => Ok(Case::Beurling),
            "roumieu" => Ok(Case::Roumieu),
            _ => Err(Error::InvalidParameter(format!("unknown case {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Triviality {
    Nontrivial,
    Trivial,
    Unknown,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrivialityReport {
    pub verdict: Triviality,
    pub case: Case,
    pub weight: String,
    pub window: Window,
    /// Smallest and largest sampled `ω(t)/t²`.
    #[serde(with = "crate::ext::scalar")]
    pub ratio_min: f64,
    #[serde(with = "crate::ext::scalar")]
    pub ratio_max: f64,
    #[serde(with = "crate::ext::scalar")]
    pub ratio_last: f64,
}

/// Decide whether the Gelfand–Shilov space of `w` is trivial from the trend
/// of `ω(t)/t²`.
pub fn classify_triviality(w: &WeightFn, case: Case, cfg: &RunConfig) -> TrivialityReport {
    let stability = cfg.tolerances.stability;
    let ts = trend_grid(w, cfg);
    let xs = log_ratio_to_square(w, &ts);
    let verdict = match case {
        Case::Beurling => match trend::classify_to_neg_inf(&xs, Scale::Log, stability) {
            LimitTrend::Diverges { .. } => Triviality::Nontrivial,
            LimitTrend::Finite { .. } => Triviality::Trivial,
            LimitTrend::Unclear => Triviality::Unknown,
        },
        Case::Roumieu => match trend::classify_to_pos_inf(&xs, Scale::Log, stability) {
            LimitTrend::Diverges { .. } => Triviality::Trivial,
            _ => match trend::classify_sup(&xs, Scale::Log, stability) {
                SupTrend::Bounded { .. } => Triviality::Nontrivial,
                _ => Triviality::Unknown,
            },
        },
    };
    let fold = |f: fn(f64, f64) -> f64, init: f64| xs.iter().copied().fold(init, f).exp();
    TrivialityReport {
        verdict,
        case,
        weight: w.label(),
        window: Window::new(ts[0], *ts.last().unwrap()),
        ratio_min: fold(f64::min, f64::INFINITY),
        ratio_max: fold(f64::max, f64::NEG_INFINITY),
        ratio_last: xs.last().unwrap().exp(),
    }
}
