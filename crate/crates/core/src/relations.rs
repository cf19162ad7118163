//! Growth relations between weight sequences (`⪯`, `◁`, `≈`) and between
//! weight functions (`⪯`, `◁`, `∼`), the associated-function cross-check, and
//! the oscillation probe.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assocfn::{self, WeightFn};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::ext;
use crate::seqcore::LogSequence;
use crate::trend::{self, LimitTrend, Route, Scale, SupTrend};
use crate::verdict::{Counterexample, Status, Verdict, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Preceq,
    Triangleleft,
    Equiv,
    Sim,
    IncomparableProbe,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Preceq => "preceq",
            Relation::Triangleleft => "triangleleft",
            Relation::Equiv => "equiv",
            Relation::Sim => "sim",
            Relation::IncomparableProbe => "incomparable-probe",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Relation::Preceq, Relation::Triangleleft, Relation::Equiv, Relation::Sim, Relation::IncomparableProbe]
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown relation {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: Relation,
    pub verdict: Verdict,
    /// `(index or argument, ratio)` samples the verdict was decided on.
    #[serde(with = "ext::pairs")]
    pub ratio_trace: Vec<(f64, f64)>,
    #[serde(with = "ext::scalar")]
    pub liminf_est: f64,
    #[serde(with = "ext::scalar")]
    pub limsup_est: f64,
}

/// Min and max over the last half of the trace.
fn tail_extremes(xs: &[f64]) -> (f64, f64) {
    let tail = &xs[xs.len() / 2..];
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `r_p = (log M_p − log N_p) / p` for `p = 1..` up to the common finite range.
pub fn root_ratio(m: &LogSequence, n: &LogSequence) -> Result<Vec<f64>> {
    if m.truncation() != n.truncation() {
        return Err(Error::TruncationMismatch(m.truncation(), n.truncation()));
    }
    let (a, b) = (m.logm(), n.logm());
    Ok((1..=m.truncation())
        .take_while(|&p| a[p].is_finite() || b[p].is_finite())
        .map(|p| (a[p] - b[p]) / p as f64)
        .collect())
}

fn preceq_verdict(r: &[f64], stability: f64) -> Verdict {
    let win = Window::new(1.0, r.len() as f64);
    match trend::classify_sup(r, Scale::Log, stability) {
        SupTrend::Bounded { sup, argmax, .. } => {
            Verdict::holds(win).with("C", sup.exp()).with("argmax", (argmax + 1) as f64)
        }
        SupTrend::Unbounded { argmax, value, candidate } => Verdict::fails(
            win,
            Counterexample::at_index(argmax + 1, value, candidate).with_label("(log M_p - log N_p)/p above every earlier log C"),
        ),
        SupTrend::Unclear { sup, argmax, .. } => Verdict::inconclusive(win, "root ratio supremum has not settled")
            .with("C_estimate", sup.exp())
            .with("argmax", (argmax + 1) as f64),
    }
}

fn triangleleft_verdict(r: &[f64], stability: f64) -> Verdict {
    let win = Window::new(1.0, r.len() as f64);
    let n = r.len();
    match trend::classify_to_neg_inf(r, Scale::Log, stability) {
        LimitTrend::Diverges { last, drop } => Verdict::holds(win).with("final_log_ratio", last).with("drop", drop),
        LimitTrend::Finite { inf, .. } => Verdict::fails(
            win,
            Counterexample::at_index(n, r[n - 1], inf).with_label("root ratio stays above a finite level"),
        )
        .with("liminf_log_estimate", inf),
        LimitTrend::Unclear => {
            Verdict::inconclusive(win, "root ratio neither settles nor falls steadily").with("final_log_ratio", r[n - 1])
        }
    }
}

/// Decide `M rel N` on the common window.
pub fn seq_relate(m: &LogSequence, n: &LogSequence, rel: Relation, stability: f64) -> Result<RelationReport> {
    let r = root_ratio(m, n)?;
    if r.len() < 8 {
        return Err(Error::InvalidSequence("fewer than 8 comparable indices".into()));
    }
    let verdict = match rel {
        Relation::Preceq => preceq_verdict(&r, stability),
        Relation::Triangleleft => triangleleft_verdict(&r, stability),
        Relation::Equiv | Relation::Sim => {
            let back: Vec<f64> = r.iter().map(|x| -x).collect();
            combine(preceq_verdict(&r, stability), preceq_verdict(&back, stability), "M<=N", "N<=M")
        }
        Relation::IncomparableProbe => return oscillation_probe(m, n),
    };
    let (lo, hi) = tail_extremes(&r);
    Ok(RelationReport {
        relation: rel,
        verdict,
        ratio_trace: r.iter().enumerate().map(|(i, x)| ((i + 1) as f64, x.exp())).collect(),
        liminf_est: lo.exp(),
        limsup_est: hi.exp(),
    })
}

/// Conjunction of two verdicts with prefixed witnesses.
fn combine(a: Verdict, b: Verdict, la: &str, lb: &str) -> Verdict {
    let status = a.status.and(b.status);
    let mut out = Verdict { status, ..Verdict::holds(a.window) };
    for (label, v) in [(la, &a), (lb, &b)] {
        for (k, x) in &v.witness {
            out.witness.insert(format!("{label}.{k}"), *x);
        }
        if v.status == Status::Fails && out.counterexample.is_none() {
            out.counterexample = v.counterexample.clone().map(|c| c.with_label(label));
        }
    }
    if status != Status::Holds {
        out.note = Some(format!("{la}: {}, {lb}: {}", a.status, b.status));
    }
    out
}

fn weight_grid(w: &WeightFn, v: &WeightFn, cfg: &RunConfig) -> Vec<f64> {
    let a = assocfn::trend_grid(w, cfg);
    let hi = assocfn::t_hi(v, cfg);
    a.into_iter().filter(|&t| t <= hi).collect()
}

/// Decide `w rel v` for weight functions: `w ⪯ v` iff `v = O(w)`,
/// `w ◁ v` iff `v = o(w)`.
pub fn wf_relate(w: &WeightFn, v: &WeightFn, rel: Relation, cfg: &RunConfig) -> Result<RelationReport> {
    let stability = cfg.tolerances.stability;
    let ts = weight_grid(w, v, cfg);
    if ts.len() < 16 {
        return Err(Error::CoarseGrid("fewer than 16 common probe points".into()));
    }
    let wv = w.eval_many(&ts);
    let vv = v.eval_many(&ts);
    let x: Vec<f64> = wv.iter().zip(&vv).map(|(a, b)| b.ln() - a.ln()).collect();
    let win = Window::new(ts[0], *ts.last().unwrap());
    let tail_zero = wv[wv.len() / 2..].iter().all(|a| *a == 0.0);
    let relabel = |mut v: Verdict| {
        v.window = win;
        if let Some(cx) = v.counterexample.as_mut() {
            cx.argument = cx.index.take().map(|i| ts[i as usize - 1]);
        }
        v
    };
    let verdict = if tail_zero {
        Verdict::inconclusive(win, "w vanishes on the probe tail")
    } else {
        match rel {
            Relation::Preceq => relabel(preceq_verdict(&x, stability)),
            Relation::Triangleleft => relabel(triangleleft_verdict(&x, stability)),
            Relation::Sim | Relation::Equiv => {
                let back: Vec<f64> = x.iter().map(|a| -a).collect();
                relabel(combine(preceq_verdict(&x, stability), preceq_verdict(&back, stability), "v=O(w)", "w=O(v)"))
            }
            Relation::IncomparableProbe => {
                return Err(Error::InvalidParameter("the probe compares sequences".into()));
            }
        }
    };
    let (lo, hi) = tail_extremes(&x);
    Ok(RelationReport {
        relation: rel,
        verdict,
        ratio_trace: ts.iter().zip(&x).map(|(t, a)| (*t, a.exp())).collect(),
        liminf_est: lo.exp(),
        limsup_est: hi.exp(),
    })
}

/// Outcome of the associated-function side of a transfer check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransferSide {
    pub relation: String,
    pub sequence_side: Status,
    pub function_side: Status,
    pub agreement: Status,
    pub function_verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransferReport {
    pub verdict: Verdict,
    pub sides: Vec<TransferSide>,
}

/// `d_A(t) = ω_N(t) − ω_M(A t)` on the reliable range of `N`.
fn transfer_gap(m: &WeightFn, n: &WeightFn, a: f64, ts: &[f64]) -> Vec<f64> {
    ts.par_iter().map(|&t| n.eval(t) - m.eval(a * t)).collect()
}

/// `classify_sup`, also settling a sup whose last peak sits in the first three
/// quarters of the window and is followed by a run tending to `-inf`.
fn transfer_sup(d: &[f64], stability: f64) -> SupTrend {
    let t = trend::classify_sup(d, Scale::Linear, stability);
    if let SupTrend::Unclear { sup, argmax, .. } = t {
        let flat = 1e-12 * sup.abs().max(1.0);
        let last = d.iter().rposition(|&x| x >= sup - flat).unwrap_or(argmax);
        if 4 * last < 3 * d.len()
            && matches!(trend::classify_to_neg_inf(&d[last..], Scale::Linear, stability), LimitTrend::Diverges { .. })
        {
            return SupTrend::Bounded { sup, argmax, route: Route::Receding };
        }
    }
    t
}

fn transfer_grid(n: &WeightFn, cfg: &RunConfig) -> Vec<f64> {
    cfg.log_grid(1.0, assocfn::t_hi(n, cfg).max(2.0))
}

/// `M ⪯ N` via `∃A, B: ω_N(t) ≤ ω_M(A t) + B`, for power-of-two `A`.
fn function_preceq(m: &WeightFn, n: &WeightFn, cfg: &RunConfig) -> Verdict {
    let ts = transfer_grid(n, cfg);
    let hi = *ts.last().unwrap();
    let win = Window::new(1.0, hi);
    let mut all_unbounded = true;
    let mut first_cx = None;
    let mut k = 0;
    while 2f64.powi(k) <= hi.sqrt() {
        let a = 2f64.powi(k);
        let d = transfer_gap(m, n, a, &ts);
        match transfer_sup(&d, cfg.tolerances.stability) {
            SupTrend::Bounded { sup, .. } => return Verdict::holds(win).with("A", a).with("B", sup.max(0.0)),
            SupTrend::Unbounded { argmax, value, candidate } => {
                first_cx.get_or_insert(
                    Counterexample::at_argument(ts[argmax], value, candidate).with_label(format!("omega_N(t) - omega_M({a} t)")),
                );
            }
            SupTrend::Unclear { .. } => all_unbounded = false,
        }
        k += 1;
    }
    match first_cx {
        Some(cx) if all_unbounded => Verdict::fails(win, cx),
        _ => Verdict::inconclusive(win, "no power-of-two A gives a settled B"),
    }
}

/// `M ◁ N` via `∀A ∃B: ω_N(t) ≤ ω_M(A t) + B`, for `A ∈ {1/8, …, 8}`.
fn function_triangleleft(m: &WeightFn, n: &WeightFn, cfg: &RunConfig) -> Verdict {
    let ts = transfer_grid(n, cfg);
    let win = Window::new(1.0, *ts.last().unwrap());
    let mut out = Verdict::holds(win);
    let mut unclear = false;
    for k in -3..=3 {
        let a = 2f64.powi(k);
        let d = transfer_gap(m, n, a, &ts);
        match transfer_sup(&d, cfg.tolerances.stability) {
            SupTrend::Bounded { sup, .. } => out = out.with(&format!("B(A={a})"), sup.max(0.0)),
            SupTrend::Unbounded { argmax, value, candidate } => {
                return Verdict::fails(
                    win,
                    Counterexample::at_argument(ts[argmax], value, candidate).with_label(format!("omega_N(t) - omega_M({a} t)")),
                )
            }
            SupTrend::Unclear { .. } => unclear = true,
        }
    }
    if unclear {
        let mut v = Verdict::inconclusive(win, "some A in 1/8..8 gives an unsettled B");
        v.witness = out.witness;
        return v;
    }
    out
}

/// Agreement of two three-valued answers to the same question.
fn agree(seq: Status, fun: Status) -> Status {
    use Status::*;
    match (seq, fun) {
        (Holds, Holds) | (Fails, Fails) => Holds,
        (Holds, Fails) | (Fails, Holds) => Fails,
        (Holds, Inconclusive) | (Inconclusive, Holds) => Inconclusive,
        _ => Holds,
    }
}

/// Compare the sequence-side and associated-function-side verdicts of
/// `M ⪯ N`, `N ⪯ M` and `M ◁ N`.
pub fn crosscheck_transfer(m: &LogSequence, n: &LogSequence, cfg: &RunConfig) -> Result<TransferReport> {
    let stability = cfg.tolerances.stability;
    let wm = WeightFn::associated(m.clone());
    let wn = WeightFn::associated(n.clone());
    let questions: [(&str, &LogSequence, &LogSequence, &WeightFn, &WeightFn, Relation); 3] = [
        ("M preceq N", m, n, &wm, &wn, Relation::Preceq),
        ("N preceq M", n, m, &wn, &wm, Relation::Preceq),
        ("M triangleleft N", m, n, &wm, &wn, Relation::Triangleleft),
    ];
    let mut sides = Vec::new();
    let mut verdict = Verdict::holds(Window::new(1.0, m.truncation() as f64));
    let mut status = Status::Holds;
    for (label, a, b, wa, wb, rel) in questions {
        let s = seq_relate(a, b, rel, stability)?.verdict;
        let f = match rel {
            Relation::Preceq => function_preceq(wa, wb, cfg),
            _ => function_triangleleft(wa, wb, cfg),
        };
        let agreement = agree(s.status, f.status);
        status = status.and(agreement);
        if agreement == Status::Fails && verdict.counterexample.is_none() {
            verdict.counterexample = f
                .counterexample
                .clone()
                .or(s.counterexample.clone())
                .map(|c| c.with_label(format!("{label}: sequence side {}, function side {}", s.status, f.status)));
        }
        verdict = verdict.with(&format!("{label}.sequence_holds"), (s.status == Status::Holds) as u8 as f64);
        verdict = verdict.with(&format!("{label}.function_holds"), (f.status == Status::Holds) as u8 as f64);
        sides.push(TransferSide {
            relation: label.to_string(),
            sequence_side: s.status,
            function_side: f.status,
            agreement,
            function_verdict: f,
        });
    }
    verdict.status = status;
    if status == Status::Inconclusive {
        verdict.note = Some("one side inconclusive while the other affirms".into());
    }
    if status != Status::Fails {
        verdict.counterexample = None;
    }
    Ok(TransferReport { verdict, sides })
}

/// Anchor-based oscillation test on `(position, log ratio)` samples: the
/// values above zero must rise strictly, those below zero must fall
/// strictly, each side needs at least two anchors, and the last two anchors
/// must lie on opposite sides.
pub fn probe_anchors(points: &[(f64, f64)]) -> RelationReport {
    let xs: Vec<f64> = points.iter().map(|p| p.1).collect();
    let win = Window::new(points.first().map_or(0.0, |p| p.0), points.last().map_or(0.0, |p| p.0));
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let report = |verdict| RelationReport {
        relation: Relation::IncomparableProbe,
        verdict,
        ratio_trace: points.iter().map(|(p, x)| (*p, x.exp())).collect(),
        liminf_est: lo.exp(),
        limsup_est: hi.exp(),
    };
    if points.len() < 4 {
        return report(Verdict::inconclusive(win, "fewer than 4 usable anchors"));
    }
    let mut last_hi = f64::NEG_INFINITY;
    let mut last_lo = f64::INFINITY;
    let (mut n_hi, mut n_lo) = (0, 0);
    for &(p, x) in points {
        let broken = if x > 0.0 {
            n_hi += 1;
            let ok = x > last_hi;
            last_hi = x;
            !ok
        } else if x < 0.0 {
            n_lo += 1;
            let ok = x < last_lo;
            last_lo = x;
            !ok
        } else {
            true
        };
        if broken {
            let bound = if x > 0.0 { last_hi } else { last_lo };
            return report(Verdict::fails(
                win,
                Counterexample::at_argument(p, x, bound).with_label("anchor breaks the widening oscillation"),
            ));
        }
    }
    let k = points.len();
    let alternating_end = (points[k - 1].1 > 0.0) != (points[k - 2].1 > 0.0);
    if n_hi < 2 || n_lo < 2 || !alternating_end {
        let (p, x) = points[k - 1];
        return report(Verdict::fails(
            win,
            Counterexample::at_argument(p, x, 0.0).with_label("anchors do not straddle the target on both sides"),
        ));
    }
    report(Verdict::holds(win).with("liminf_log", lo).with("limsup_log", hi).with("anchors", k as f64))
}

/// Oscillation probe of `r_p = (log M_p − log N_p)/p` at the dyadic indices.
pub fn oscillation_probe(m: &LogSequence, n: &LogSequence) -> Result<RelationReport> {
    let r = root_ratio(m, n)?;
    let mut points = Vec::new();
    let mut p = 1usize;
    while p <= r.len() {
        points.push((p as f64, r[p - 1]));
        p *= 2;
    }
    Ok(probe_anchors(&points))
}
