//! Young conjugate `φ*_ω(s) = sup_{y≥0} (s y − ω(e^y))` and the weight
//! matrix `W^(λ)_p = exp((1/λ) φ*_ω(λ p))` generated by a weight function.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assocfn::WeightFn;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::ext::{self, log_le};
use crate::legendre::LegendreGrid;
use crate::matrices::WeightMatrix;
use crate::seqcore::{LogSequence, Provenance};
use crate::trend::{self, Scale, SupTrend};
use crate::verdict::{Counterexample, Verdict, Window};

fn per_unit(cfg: &RunConfig) -> f64 {
    cfg.points_per_decade as f64 / std::f64::consts::LN_10
}

fn grid<'a>(phi: &'a (dyn Fn(f64) -> f64 + Sync), s_max: f64, cfg: &RunConfig) -> LegendreGrid<'a> {
    LegendreGrid::new(phi, 0.0, cfg.t_max.ln(), per_unit(cfg), s_max)
}

/// `φ*_ω(s)`; `+inf` when `s` exceeds the eventual slope of `φ_ω`.
pub fn young_conjugate(w: &WeightFn, s: f64, cfg: &RunConfig) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidParameter(format!("conjugate needs s >= 0, got {s}")));
    }
    let phi = |y: f64| w.phi(y);
    Ok(grid(&phi, s, cfg).conjugate(s).0)
}

/// `φ*_ω` sampled on an increasing grid of slopes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjugateTable {
    pub source: String,
    pub s_grid: Vec<f64>,
    #[serde(with = "ext::vec")]
    pub values: Vec<f64>,
    /// Supremum of the slopes with a finite conjugate.
    #[serde(with = "ext::scalar")]
    pub finite_threshold: f64,
}

pub fn conjugate_table(w: &WeightFn, s_grid: &[f64], cfg: &RunConfig) -> Result<ConjugateTable> {
    if s_grid.is_empty() || s_grid[0] < 0.0 || s_grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter("slope grid must be nonnegative and increasing".into()));
    }
    let phi = |y: f64| w.phi(y);
    let g = grid(&phi, *s_grid.last().unwrap(), cfg);
    let values = s_grid.par_iter().map(|&s| g.conjugate(s).0).collect();
    let finite_threshold = if g.capped() { g.end_slope() } else { f64::INFINITY };
    Ok(ConjugateTable { source: w.label(), s_grid: s_grid.to_vec(), values, finite_threshold })
}

impl ConjugateTable {
    /// TSV rows `s \t value`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (s, v) in self.s_grid.iter().zip(&self.values) {
            out.push_str(&format!("{s}\t{v}\n"));
        }
        out
    }

    /// Monotonicity, convexity and monotone `value/s` on the finite region.
    pub fn check_shape(&self, tol: f64) -> Verdict {
        let n = self.values.iter().position(|v| !v.is_finite()).unwrap_or(self.values.len());
        let (s, v) = (&self.s_grid[..n], &self.values[..n]);
        let win = Window::new(self.s_grid[0], *self.s_grid.last().unwrap());
        let slack = |x: f64| tol * x.abs().max(1.0);
        for i in 1..n {
            if v[i] < v[i - 1] - slack(v[i]) {
                return Verdict::fails(win, Counterexample::at_argument(s[i], v[i], v[i - 1]).with_label("decreasing"));
            }
            if s[i - 1] > 0.0 && v[i] / s[i] < v[i - 1] / s[i - 1] - slack(v[i] / s[i]) {
                return Verdict::fails(
                    win,
                    Counterexample::at_argument(s[i], v[i] / s[i], v[i - 1] / s[i - 1]).with_label("value/s decreasing"),
                );
            }
        }
        for i in 1..n.saturating_sub(1) {
            let lhs = v[i];
            let a = (s[i + 1] - s[i]) / (s[i + 1] - s[i - 1]);
            let rhs = a * v[i - 1] + (1.0 - a) * v[i + 1];
            if lhs > rhs + slack(lhs) {
                return Verdict::fails(win, Counterexample::at_argument(s[i], lhs, rhs).with_label("not convex"));
            }
        }
        Verdict::holds(win).with("finite_points", n as f64).with("finite_threshold", self.finite_threshold)
    }
}

/// `W^(λ)` for every `λ` in `lambdas`, from the normalized weight.
pub fn matrix_of_weight(w: &WeightFn, lambdas: &[f64], truncation: usize, cfg: &RunConfig) -> Result<WeightMatrix> {
    if lambdas.is_empty() {
        return Err(Error::InvalidParameter("empty parameter grid".into()));
    }
    if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) || lambdas.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter("parameters must be positive and increasing".into()));
    }
    if truncation < 8 {
        return Err(Error::InvalidParameter(format!("truncation {truncation} < 8")));
    }
    let wn = w.clone().normalized();
    let phi = |y: f64| wn.phi(y);
    let s_max = lambdas.last().unwrap() * truncation as f64;
    let g = grid(&phi, s_max, cfg);
    let rows: Vec<(f64, Vec<f64>)> = lambdas
        .par_iter()
        .map(|&l| {
            let mut logm: Vec<f64> = (0..=truncation).map(|p| g.conjugate(l * p as f64).0 / l).collect();
            if let Some(i) = logm.iter().position(|x| *x == f64::INFINITY) {
                logm[i..].iter_mut().for_each(|x| *x = f64::INFINITY);
            }
            (l, logm)
        })
        .collect();
    let mut entries = Vec::with_capacity(rows.len());
    for (l, logm) in rows {
        let seq = LogSequence::new(format!("W^({l})"), Provenance::Weight { lambda: Some(l) }, logm)?;
        entries.push((l, seq));
    }
    let m = WeightMatrix::new(format!("M[{}]", w.label()), entries)?;
    let order = monotone_in_lambda(&m, cfg.tolerances.log_tol);
    if order.is_fails() {
        return Err(Error::InvalidMatrix(format!("generated matrix is not ordered in lambda: {:?}", order.counterexample)));
    }
    Ok(m)
}

fn finite_len(m: &LogSequence) -> usize {
    m.first_infinite().unwrap_or(m.truncation() + 1)
}

/// `W^(λ)_0 = 1` for every row.
pub fn unit_at_zero(m: &WeightMatrix, tol: f64) -> Verdict {
    let win = Window::new(0.0, 0.0);
    let mut worst = 0.0f64;
    for (l, row) in m.entries() {
        let v = row.logm()[0];
        if v.abs() > tol {
            return Verdict::fails(win, Counterexample::at_index(0, v, 0.0).with_label(format!("lambda = {l}")));
        }
        worst = worst.max(v.abs());
    }
    Verdict::holds(win).with("max_abs_log_w0", worst)
}

/// `(W^(λ)_p)² ≤ W^(λ)_{p−1} W^(λ)_{p+1}`.
pub fn log_convex_rows(m: &WeightMatrix, tol: f64) -> Verdict {
    let win = Window::new(1.0, (m.truncation() - 1) as f64);
    let mut min_gap = f64::INFINITY;
    for (l, row) in m.entries() {
        let x = row.logm();
        for p in 1..finite_len(row).saturating_sub(1) {
            let (lhs, rhs) = (2.0 * x[p], x[p - 1] + x[p + 1]);
            if !log_le(lhs, rhs, tol) {
                return Verdict::fails(win, Counterexample::at_index(p, lhs, rhs).with_label(format!("lambda = {l}")));
            }
            min_gap = min_gap.min(rhs - lhs);
        }
    }
    Verdict::holds(win).with("min_gap", min_gap)
}

/// `W^(κ) ≤ W^(λ)` entrywise for `κ ≤ λ`.
pub fn monotone_in_lambda(m: &WeightMatrix, tol: f64) -> Verdict {
    let win = Window::new(0.0, m.truncation() as f64);
    let mut min_gap = f64::INFINITY;
    for pair in m.entries().windows(2) {
        let ((k, a), (l, b)) = (&pair[0], &pair[1]);
        for p in 0..=m.truncation() {
            let (x, y) = (a.logm()[p], b.logm()[p]);
            if !log_le(x, y, tol) {
                return Verdict::fails(
                    win,
                    Counterexample::at_index(p, x, y).with_label(format!("kappa = {k}, lambda = {l}")),
                );
            }
            if y.is_finite() {
                min_gap = min_gap.min(y - x);
            }
        }
    }
    Verdict::holds(win).with("min_gap", min_gap)
}

/// `W^(λ)_{p+q} ≤ W^(2λ)_p W^(2λ)_q` for `p + q ≤ window`, over every `λ`
/// whose double is on the grid.
pub fn doubling_in_lambda(m: &WeightMatrix, window: usize, tol: f64) -> Verdict {
    let n_max = window.min(m.truncation());
    let win = Window::new(0.0, n_max as f64);
    let mut pairs = 0;
    let mut min_gap = f64::INFINITY;
    for (l, row) in m.entries() {
        let Some(big) = m.entry(2.0 * l) else { continue };
        pairs += 1;
        let (a, b) = (row.logm(), big.logm());
        for n in 0..=n_max {
            for p in 0..=n / 2 {
                let (lhs, rhs) = (a[n], b[p] + b[n - p]);
                if !log_le(lhs, rhs, tol) {
                    return Verdict::fails(win, Counterexample::at_pair(p, n - p, lhs, rhs).with_label(format!("lambda = {l}")));
                }
                if rhs.is_finite() {
                    min_gap = min_gap.min(rhs - lhs);
                }
            }
        }
    }
    if pairs == 0 {
        return Verdict::inconclusive(win, "no parameter has its double on the grid");
    }
    Verdict::holds(win).with("pairs", pairs as f64).with("min_gap", min_gap)
}

/// `W^(λ)_p W^(λ)_q ≤ W^(λ)_{p+q}` for `p + q ≤ window`: the separated
/// growth conditions with `κ = λ` and `A = 1`.
pub fn superadditive_rows(m: &WeightMatrix, window: usize, tol: f64) -> Verdict {
    let n_max = window.min(m.truncation());
    let win = Window::new(0.0, n_max as f64);
    let mut min_gap = f64::INFINITY;
    for (l, row) in m.entries() {
        let a = row.logm();
        for n in 0..=n_max {
            for p in 0..=n / 2 {
                let (lhs, rhs) = (a[p] + a[n - p], a[n]);
                if !log_le(lhs, rhs, tol) {
                    return Verdict::fails(win, Counterexample::at_pair(p, n - p, lhs, rhs).with_label(format!("lambda = {l}")));
                }
                if rhs.is_finite() && lhs.is_finite() {
                    min_gap = min_gap.min(rhs - lhs);
                }
            }
        }
    }
    Verdict::holds(win).with("A", 1.0).with("min_gap", min_gap)
}

/// `h^p W^(λ)_p ≤ D W^(Aλ)_p`: the smallest power-of-two `A` for which every
/// `λ` with `Aλ` on the grid has a settled `D`, with the largest such `D`.
pub fn scaling_in_lambda(m: &WeightMatrix, h: f64, stability: f64) -> Verdict {
    let win = Window::new(1.0, m.truncation() as f64);
    let mut saw_candidate = false;
    for k in 0..=10 {
        let a = 2f64.powi(k);
        let mut d_max = 1.0f64;
        let mut used = 0;
        let mut ok = true;
        for (l, row) in m.entries() {
            let Some(big) = m.entry(a * l) else { continue };
            used += 1;
            let end = finite_len(row).min(finite_len(big));
            let xs: Vec<f64> = (1..end).map(|p| p as f64 * h.ln() + row.logm()[p] - big.logm()[p]).collect();
            match trend::classify_running_max(&xs, Scale::Log, stability) {
                SupTrend::Bounded { sup, .. } => d_max = d_max.max(sup.exp()),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if used == 0 {
            break;
        }
        saw_candidate = true;
        if ok {
            return Verdict::holds(win).with("h", h).with("A", a).with("D", d_max).with("rows", used as f64);
        }
    }
    let note = if saw_candidate {
        "no power-of-two A on the grid gives a settled D"
    } else {
        "parameter grid too short"
    };
    Verdict::inconclusive(win, note).with("h", h)
}

/// The structural properties of a generated weight matrix, keyed by claim.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaReport {
    pub weight: String,
    pub checks: BTreeMap<String, Verdict>,
}

pub fn lemma_block(w: &WeightFn, cfg: &RunConfig) -> Result<LemmaReport> {
    let m = matrix_of_weight(w, &cfg.lambdas, cfg.truncation, cfg)?;
    let tol = cfg.tolerances.log_tol;
    let mut checks = BTreeMap::new();
    checks.insert("W0_equals_one".to_string(), unit_at_zero(&m, tol));
    checks.insert("rows_log_convex".to_string(), log_convex_rows(&m, tol));
    checks.insert("monotone_in_lambda".to_string(), monotone_in_lambda(&m, tol));
    checks.insert("doubling_in_lambda".to_string(), doubling_in_lambda(&m, cfg.pair_window, tol));
    checks.insert("separated_growth_identity".to_string(), superadditive_rows(&m, cfg.pair_window, tol));
    for h in [2.0, 4.0] {
        checks.insert(format!("scaling_h{h}"), scaling_in_lambda(&m, h, cfg.tolerances.stability));
    }
    Ok(LemmaReport { weight: w.label(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_weight_conjugate_matches_calculus() {
        let cfg = RunConfig::default();
        let w = WeightFn::power(1.0).unwrap();
        for s in [0.0, 0.5, 1.0, 2.0, 10.0, 1000.0] {
            let v = young_conjugate(&w, s, &cfg).unwrap();
            let exact = if s >= 1.0 { s * s.ln() - s } else { -1.0 };
            assert!((v - exact).abs() < 1e-9 * exact.abs().max(1.0), "s = {s}: {v} vs {exact}");
        }
        assert!(young_conjugate(&w, -1.0, &cfg).is_err());
    }

    #[test]
    fn table_shape_holds_for_the_square() {
        let cfg = RunConfig::default();
        let s: Vec<f64> = (0..200).map(|i| i as f64 * 0.5).collect();
        let t = conjugate_table(&WeightFn::power(2.0).unwrap().normalized(), &s, &cfg).unwrap();
        assert!(t.check_shape(1e-9).is_holds());
        assert_eq!(t.finite_threshold, f64::INFINITY);
        assert_eq!(t.to_tsv().lines().count(), 200);
    }
}
