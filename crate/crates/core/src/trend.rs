//! Finite-window trend classification.
//!
//! Every asymptotic verdict in the crate is decided here from a sampled
//! sequence `x_0, ..., x_{n-1}` ordered by index or by grid argument:
//!
//! * **bounded above** when the running supremum has settled (the estimate on
//!   the first half and the estimate on the last half both agree with the
//!   full-window estimate to within the stability tolerance, or the first
//!   half carries the supremum and the last half settles on its own), or when the
//!   tail suprema decrease strictly at every dyadic scale of the upper
//!   log-half of the window;
//! * **unbounded** when the supremum is attained in the last quarter and the
//!   growth between dyadic prefixes is not decelerating;
//! * **unclear** otherwise.
//!
//! A sequence tends to `-inf` when its tail suprema decrease at every scale
//! and the last decrement is at least three quarters of the one before.

use serde::{Deserialize, Serialize};

/// Default relative tolerance of the stability heuristic.
pub const STABILITY: f64 = 0.05;

/// Ratio of successive increments below which growth counts as decelerating.
const ACCELERATION: f64 = 0.75;

/// How witness constants are read off the sampled values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// Values are logarithms of multiplicative constants.
    Log,
    /// Values are the constants themselves.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Route {
    Stable,
    Receding,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupTrend {
    Bounded { sup: f64, argmax: usize, route: Route },
    Unbounded { argmax: usize, value: f64, candidate: f64 },
    Unclear { sup: f64, argmax: usize, candidate: f64 },
}

impl SupTrend {
    pub fn sup(&self) -> f64 {
        match *self {
            SupTrend::Bounded { sup, .. } | SupTrend::Unclear { sup, .. } => sup,
            SupTrend::Unbounded { value, .. } => value,
        }
    }

    pub fn argmax(&self) -> usize {
        match *self {
            SupTrend::Bounded { argmax, .. }
            | SupTrend::Unbounded { argmax, .. }
            | SupTrend::Unclear { argmax, .. } => argmax,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, SupTrend::Bounded { .. })
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, SupTrend::Unbounded { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitTrend {
    /// The values tend to `-inf`.
    Diverges { last: f64, drop: f64 },
    /// The values stay bounded below by `inf`, attained at `argmin`.
    Finite { inf: f64, argmin: usize },
    Unclear,
}

/// Stability tolerance expressed on the sampled scale.
pub fn within(a: f64, b: f64, scale: Scale, stability: f64) -> bool {
    if a == b {
        return true;
    }
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    match scale {
        Scale::Log => (a - b).abs() <= -(1.0 - stability).ln(),
        Scale::Linear => {
            let m = a.abs().max(b.abs());
            m <= 1e-12 || (a - b).abs() <= stability * m
        }
    }
}

fn argmax(xs: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &x) in xs.iter().enumerate() {
        if x > best.1 || (i == 0 && x.is_nan()) {
            best = (i, x);
        }
    }
    best
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Suprema of the tails starting at `n >> k`, for every dyadic start in the
/// upper log-half of the window (start ≥ max(8, √n)). Latest start first.
fn tail_profile(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let floor = 8usize.max((n as f64).sqrt().ceil() as usize);
    let mut out = Vec::new();
    let mut k = 1;
    loop {
        let start = n >> k;
        if start < floor || start == 0 {
            break;
        }
        out.push(max_of(&xs[start..]));
        k += 1;
    }
    out
}

fn strictly_receding(profile: &[f64]) -> bool {
    profile.len() >= 3
        && profile.windows(2).all(|w| {
            let d = w[1] - w[0];
            d > 1e-12 * 1f64.max(w[0].abs())
        })
}

/// Classify whether the supremum of `xs` is finite.
pub fn classify_sup(xs: &[f64], scale: Scale, stability: f64) -> SupTrend {
    classify_sup_with(xs, scale, stability, false, true)
}

/// Variant that only asks the running maximum to have settled (prefix half
/// against full window), ignoring how far the tail falls below it.
pub fn classify_running_max(xs: &[f64], scale: Scale, stability: f64) -> SupTrend {
    classify_sup_with(xs, scale, stability, true, true)
}

fn classify_sup_with(xs: &[f64], scale: Scale, stability: f64, prefix_only: bool, split_tail: bool) -> SupTrend {
    let n = xs.len();
    let (am, full) = argmax(xs);
    if n < 8 {
        return SupTrend::Unclear { sup: full, argmax: am, candidate: full };
    }
    if full == f64::INFINITY {
        let candidate = max_of(&xs[..am]);
        return SupTrend::Unbounded { argmax: am, value: full, candidate };
    }
    let half = max_of(&xs[..n / 2]);
    let quarter = max_of(&xs[..n / 4]);
    let tail = max_of(&xs[n / 2..]);
    let settled = within(full, half, scale, stability);
    if settled && (prefix_only || within(full, tail, scale, stability)) {
        return SupTrend::Bounded { sup: full, argmax: am, route: Route::Stable };
    }
    if split_tail
        && settled
        && tail < full
        && matches!(
            classify_sup_with(&xs[n / 2..], scale, stability, false, false),
            SupTrend::Bounded { route: Route::Stable, .. }
        )
    {
        return SupTrend::Bounded { sup: full, argmax: am, route: Route::Stable };
    }
    if strictly_receding(&tail_profile(xs)) {
        return SupTrend::Bounded { sup: full, argmax: am, route: Route::Receding };
    }
    let e1 = full - half;
    let e2 = half - quarter;
    if !settled && am >= 3 * n / 4 && e1 > 0.0 && e1 >= ACCELERATION * e2 {
        return SupTrend::Unbounded { argmax: am, value: full, candidate: half };
    }
    SupTrend::Unclear { sup: full, argmax: am, candidate: half }
}

/// Classify whether `xs` tends to `-inf`.
pub fn classify_to_neg_inf(xs: &[f64], scale: Scale, stability: f64) -> LimitTrend {
    let profile = tail_profile(xs);
    if strictly_receding(&profile) {
        let d1 = profile[1] - profile[0];
        let d2 = profile[2] - profile[1];
        let first = *profile.last().unwrap();
        let last = profile[0];
        if d1 >= ACCELERATION * d2 && !within(first, last, scale, stability) {
            return LimitTrend::Diverges { last, drop: first - last };
        }
    }
    let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
    match classify_sup(&neg, scale, stability) {
        SupTrend::Bounded { sup, argmax, .. } => LimitTrend::Finite { inf: -sup, argmin: argmax },
        _ => LimitTrend::Unclear,
    }
}

/// Classify whether `xs` tends to `+inf`.
pub fn classify_to_pos_inf(xs: &[f64], scale: Scale, stability: f64) -> LimitTrend {
    let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
    match classify_to_neg_inf(&neg, scale, stability) {
        LimitTrend::Diverges { last, drop } => LimitTrend::Diverges { last: -last, drop },
        LimitTrend::Finite { inf, argmin } => LimitTrend::Finite { inf: -inf, argmin },
        LimitTrend::Unclear => LimitTrend::Unclear,
    }
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Verdict of a series tail test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesTrend {
    Convergent,
    Divergent,
    Unclear,
}

/// Tail classification of a positive series from the log of its terms.
///
/// The slope of `log term` against `log index` over the last quarter decides
/// first (`< -1 - delta` convergent, `> -1 + delta` divergent). In the
/// borderline band the ratio of the last two complete dyadic block sums
/// decides (condensation): near one means divergent, clearly below one
/// convergent.
pub fn classify_series(log_index: &[f64], log_terms: &[f64], delta: f64) -> (SeriesTrend, f64, f64) {
    classify_series_weighted(log_index, log_terms, None, delta)
}

/// As [`classify_series`] for samples of an integrand on a non-uniform grid:
/// `log_weights[i]` is the log of the measure carried by sample `i` and only
/// enters the condensation sums.
pub fn classify_series_weighted(
    log_index: &[f64],
    log_terms: &[f64],
    log_weights: Option<&[f64]>,
    delta: f64,
) -> (SeriesTrend, f64, f64) {
    let n = log_index.len();
    let start = 3 * n / 4;
    let slope = ols_slope(&log_index[start..], &log_terms[start..]);
    if slope < -1.0 - delta {
        return (SeriesTrend::Convergent, slope, f64::NAN);
    }
    if slope > -1.0 + delta {
        return (SeriesTrend::Divergent, slope, f64::NAN);
    }
    let ratio = condensation_ratio(log_index, log_terms, log_weights);
    let trend = if ratio >= 0.95 {
        SeriesTrend::Divergent
    } else if ratio <= 0.8 {
        SeriesTrend::Convergent
    } else {
        SeriesTrend::Unclear
    };
    (trend, slope, ratio)
}

fn condensation_ratio(log_index: &[f64], log_terms: &[f64], log_weights: Option<&[f64]>) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let last = *log_index.last().unwrap();
    let top = (last / ln2).floor() as i32;
    let mut blocks = [0.0f64; 2];
    for (i, (li, lt)) in log_index.iter().zip(log_terms).enumerate() {
        let lt = lt + log_weights.map_or(0.0, |w| w[i]);
        let b = (li / ln2).floor() as i32;
        if b == top - 1 {
            blocks[1] += lt.exp();
        } else if b == top - 2 {
            blocks[0] += lt.exp();
        }
    }
    blocks[1] / blocks[0]
}
