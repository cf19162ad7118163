use super::LogSequence;
use crate::error::{Error, Result};
use crate::ext::log_le;
use crate::trend::{self, LimitTrend, Scale, SeriesTrend, SupTrend, STABILITY};
use crate::verdict::{Counterexample, Status, Verdict, Window};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

const QUOTIENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeqCondition {
    M1,
    #[serde(rename = "normalized")]
    Normalized,
    #[serde(rename = "M2prime")]
    M2Prime,
    M2,
    #[serde(rename = "algebra")]
    Algebra,
    M0,
    #[serde(rename = "root_divergence")]
    RootDivergence,
    #[serde(rename = "nonquasianalytic")]
    NonQuasianalytic,
    LC,
}

impl SeqCondition {
    pub const ALL: [SeqCondition; 9] = [
        SeqCondition::M1,
        SeqCondition::Normalized,
        SeqCondition::M2Prime,
        SeqCondition::M2,
        SeqCondition::Algebra,
        SeqCondition::M0,
        SeqCondition::RootDivergence,
        SeqCondition::NonQuasianalytic,
        SeqCondition::LC,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SeqCondition::M1 => "M1",
            SeqCondition::Normalized => "normalized",
            SeqCondition::M2Prime => "M2prime",
            SeqCondition::M2 => "M2",
            SeqCondition::Algebra => "algebra",
            SeqCondition::M0 => "M0",
            SeqCondition::RootDivergence => "root_divergence",
            SeqCondition::NonQuasianalytic => "nonquasianalytic",
            SeqCondition::LC => "LC",
        }
    }
}

impl fmt::Display for SeqCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeqCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeqCondition::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown sequence condition {s:?}")))
    }
}

pub fn check_sequence_condition(m: &LogSequence, cond: SeqCondition) -> Result<Verdict> {
    check_sequence_condition_with(m, cond, STABILITY)
}

pub fn check_sequence_condition_with(m: &LogSequence, cond: SeqCondition, stability: f64) -> Result<Verdict> {
    if m.is_exotic() && !matches!(cond, SeqCondition::M1 | SeqCondition::Normalized) {
        return Err(Error::ExoticCondition(cond.to_string()));
    }
    let v = match cond {
        SeqCondition::M1 => m1(m),
        SeqCondition::Normalized => normalized(m),
        SeqCondition::M2Prime => m2_prime(m, stability),
        SeqCondition::M2 => m2(m, stability),
        SeqCondition::Algebra => algebra(m),
        SeqCondition::M0 => m0(m, stability),
        SeqCondition::RootDivergence => root_divergence(m, stability),
        SeqCondition::NonQuasianalytic => nonquasianalytic(m),
        SeqCondition::LC => return check_lc_with(m, stability),
    };
    Ok(v)
}

/// Log-convex and normalized with divergent roots.
pub fn check_lc(m: &LogSequence) -> Result<Verdict> {
    check_lc_with(m, STABILITY)
}

fn check_lc_with(m: &LogSequence, stability: f64) -> Result<Verdict> {
    if m.is_exotic() {
        return Err(Error::ExoticCondition("LC".into()));
    }
    let parts = [
        ("normalized", normalized(m)),
        ("M1", m1(m)),
        ("root_divergence", root_divergence(m, stability)),
    ];
    let mut out = Verdict::holds(window(m));
    let mut status = Status::Holds;
    let mut notes = Vec::new();
    for (name, v) in parts {
        status = status.and(v.status);
        for (k, x) in &v.witness {
            out.witness.insert(format!("{name}.{k}"), *x);
        }
        if v.status == Status::Fails && out.counterexample.is_none() {
            out.counterexample = v.counterexample.map(|c| c.with_label(name));
        }
        if v.status != Status::Holds {
            notes.push(format!("{name}: {}", v.status));
        }
    }
    out.status = status;
    if status != Status::Fails {
        out.counterexample = None;
    }
    if !notes.is_empty() {
        out.note = Some(notes.join("; "));
    }
    Ok(out)
}

fn window(m: &LogSequence) -> Window {
    Window::new(1.0, m.truncation() as f64)
}

fn m1(m: &LogSequence) -> Verdict {
    let mu = m.logmu();
    let end = m.first_infinite().unwrap_or(mu.len());
    let mut min_inc = f64::INFINITY;
    for p in 2..end {
        if !log_le(mu[p - 1], mu[p], QUOTIENT_TOL) {
            return Verdict::fails(window(m), Counterexample::at_index(p, mu[p - 1], mu[p]));
        }
        min_inc = min_inc.min(mu[p] - mu[p - 1]);
    }
    Verdict::holds(window(m)).with("min_increment", min_inc)
}

fn normalized(m: &LogSequence) -> Verdict {
    let (l0, mu1) = (m.logm()[0], m.logmu()[1]);
    if l0.abs() > QUOTIENT_TOL {
        return Verdict::fails(window(m), Counterexample::at_index(0, l0.abs(), 0.0).with_label("logm[0] != 0"));
    }
    if mu1 < -QUOTIENT_TOL {
        return Verdict::fails(window(m), Counterexample::at_index(1, 0.0, mu1).with_label("mu_1 < 1"));
    }
    Verdict::holds(window(m)).with("logm0", l0).with("logmu1", mu1)
}

fn sup_verdict(win: Window, trend: SupTrend, key: &str, offset: usize, label: &str) -> Verdict {
    match trend {
        SupTrend::Bounded { sup, argmax, .. } => {
            Verdict::holds(win).with(key, sup.exp()).with("argmax", (argmax + offset) as f64)
        }
        SupTrend::Unbounded { argmax, value, candidate } => Verdict::fails(
            win,
            Counterexample::at_index(argmax + offset, value, candidate).with_label(label),
        ),
        SupTrend::Unclear { sup, argmax, .. } => {
            Verdict::inconclusive(win, format!("{label}: supremum has not settled on the window"))
                .with(&format!("{key}_estimate"), sup.exp())
                .with("argmax", (argmax + offset) as f64)
        }
    }
}

fn m2_prime(m: &LogSequence, stability: f64) -> Verdict {
    let l = m.logm();
    let xs: Vec<f64> = (0..m.truncation()).map(|p| (l[p + 1] - l[p]) / (p + 1) as f64).collect();
    let trend = trend::classify_running_max(&xs, Scale::Log, stability);
    sup_verdict(window(m), trend, "D", 0, "log(M_{p+1}/M_p)/(p+1)")
}

/// Per-n maximum of `(logm[n] - logm[p] - logm[n - p]) / n` with its argmax p.
fn m2_direct_profile(l: &[f64]) -> Vec<(f64, usize)> {
    (1..l.len())
        .into_par_iter()
        .map(|n| {
            let mut best = (f64::NEG_INFINITY, 0);
            for p in 0..=n / 2 {
                let v = (l[n] - l[p] - l[n - p]) / n as f64;
                if v > best.0 {
                    best = (v, p);
                }
            }
            best
        })
        .collect()
}

fn m2(m: &LogSequence, stability: f64) -> Verdict {
    let l = m.logm();
    let win = window(m);
    let profile = m2_direct_profile(l);
    let direct_xs: Vec<f64> = profile.iter().map(|x| x.0).collect();
    let direct = trend::classify_sup(&direct_xs, Scale::Log, stability);
    let mu = m.logmu();
    let quot_xs: Vec<f64> = (1..l.len()).map(|p| mu[p] - l[p] / p as f64).collect();
    let quotient = trend::classify_sup(&quot_xs, Scale::Log, stability);
    match (direct, quotient) {
        (SupTrend::Bounded { sup: c, .. }, SupTrend::Bounded { sup: a, .. }) => {
            Verdict::holds(win).with("C", c.exp()).with("A", a.exp())
        }
        (SupTrend::Unbounded { argmax, value, candidate }, SupTrend::Unbounded { .. }) => {
            let n = argmax + 1;
            let p = profile[argmax].1;
            Verdict::fails(win, Counterexample::at_pair(p, n - p, value, candidate).with_label("direct scan"))
        }
        (d, q) => Verdict::inconclusive(
            win,
            format!(
                "direct scan {} and quotient criterion {} disagree or have not settled",
                describe(&d),
                describe(&q)
            ),
        )
        .with("C_estimate", d.sup().exp())
        .with("A_estimate", q.sup().exp()),
    }
}

fn describe(t: &SupTrend) -> &'static str {
    match t {
        SupTrend::Bounded { .. } => "bounded",
        SupTrend::Unbounded { .. } => "unbounded",
        SupTrend::Unclear { .. } => "unclear",
    }
}

fn algebra(m: &LogSequence) -> Verdict {
    let l = m.logm();
    let n_max = l.len() - 1;
    let first = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut worst = (f64::NEG_INFINITY, 0usize);
            let mut violation = None;
            for p in 0..=n / 2 {
                let lhs = l[p] + l[n - p];
                if lhs - l[n] > worst.0 {
                    worst = (lhs - l[n], p);
                }
                if violation.is_none() && !log_le(lhs, l[n], QUOTIENT_TOL) {
                    violation = Some((p, n - p, lhs, l[n]));
                }
            }
            (worst.0, violation)
        })
        .collect::<Vec<_>>();
    let mut max_excess = f64::NEG_INFINITY;
    for (excess, violation) in &first {
        if let Some((p, q, lhs, rhs)) = violation {
            return Verdict::fails(window(m), Counterexample::at_pair(*p, *q, *lhs, *rhs));
        }
        max_excess = max_excess.max(*excess);
    }
    Verdict::holds(window(m)).with("max_excess", max_excess)
}

fn m0(m: &LogSequence, stability: f64) -> Verdict {
    let l = m.logm();
    // -(logm[p]/p - log(p + 1)): (M0) asks for this to be bounded above.
    let xs: Vec<f64> = (1..l.len()).map(|p| ((p + 1) as f64).ln() - l[p] / p as f64).collect();
    match trend::classify_sup(&xs, Scale::Log, stability) {
        SupTrend::Bounded { sup, .. } => Verdict::holds(window(m)).with("c", (-sup).exp()),
        SupTrend::Unbounded { argmax, value, candidate } => Verdict::fails(
            window(m),
            Counterexample::at_index(argmax + 1, value, candidate).with_label("log(p+1) - logm[p]/p"),
        ),
        SupTrend::Unclear { sup, .. } => {
            Verdict::inconclusive(window(m), "infimum of logm[p]/p - log(p+1) has not settled")
                .with("c_estimate", (-sup).exp())
        }
    }
}

fn root_divergence(m: &LogSequence, stability: f64) -> Verdict {
    let l = m.logm();
    let xs: Vec<f64> = (1..l.len()).map(|p| l[p] / p as f64).collect();
    let p_max = m.truncation();
    match trend::classify_to_pos_inf(&xs, Scale::Log, stability) {
        LimitTrend::Diverges { last, drop } => {
            Verdict::holds(window(m)).with("final_root_log", last).with("rise", drop)
        }
        LimitTrend::Finite { .. } => {
            let sup = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Verdict::fails(
                window(m),
                Counterexample::at_index(p_max, sup, xs[p_max - 1]).with_label("logm[p]/p stays bounded"),
            )
        }
        LimitTrend::Unclear => Verdict::inconclusive(window(m), "logm[p]/p is plateauing")
            .with("final_root_log", xs[p_max - 1]),
    }
}

fn nonquasianalytic(m: &LogSequence) -> Verdict {
    let mu = m.logmu();
    let p_max = m.truncation();
    let log_index: Vec<f64> = (1..=p_max).map(|p| (p as f64).ln()).collect();
    let log_terms: Vec<f64> = (1..=p_max).map(|p| -mu[p]).collect();
    let partial: f64 = log_terms.iter().map(|t| t.exp()).sum();
    let half: f64 = log_terms[..p_max / 2].iter().map(|t| t.exp()).sum();
    let (trend, slope, ratio) = trend::classify_series(&log_index, &log_terms, 0.1);
    let win = window(m);
    match trend {
        SeriesTrend::Convergent => Verdict::holds(win).with("partial_sum", partial).with("tail_slope", slope),
        SeriesTrend::Divergent => Verdict::fails(
            win,
            Counterexample::at_index(p_max, partial, half).with_label("divergent tail of sum 1/mu_p"),
        )
        .with("tail_slope", slope)
        .with("block_ratio", ratio),
        SeriesTrend::Unclear => Verdict::inconclusive(win, "tail of sum 1/mu_p is borderline")
            .with("partial_sum", partial)
            .with("tail_slope", slope)
            .with("block_ratio", ratio),
    }
}
