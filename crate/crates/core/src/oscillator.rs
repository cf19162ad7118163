//! A weight sequence `M` whose quotients oscillate around those of a target
//! `N`: planning of the stage exponents `n_j`, block construction with
//! closed-form anchors at unbounded indices, and verification of the
//! construction's claims.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::relations::{probe_anchors, seq_relate, Relation, RelationReport};
use crate::seqcore::{big_ln, big_to_f64, check_sequence_condition, Anchor, Block, BlockSequence, LogSequence, Provenance, SeqCondition};
use crate::trend::{self, Scale, SupTrend};
use crate::verdict::{Counterexample, Status, Verdict, Window};

const MAX_EXPONENT: u64 = 1_000_000;
const ANCHOR_TOL: f64 = 1e-9;

/// Quotient source of the target `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Target {
    /// `N = G^s`, so `ν_p = p^s` at every index.
    Gevrey { s: f64 },
    /// Tabulated quotients, usable up to the truncation only.
    Sequence { sequence: LogSequence },
}

impl Target {
    pub fn label(&self) -> String {
        match self {
            Target::Gevrey { s } => format!("G^{s}"),
            Target::Sequence { sequence } => sequence.name().to_string(),
        }
    }

    /// `log ν_k`.
    pub fn log_nu(&self, k: &BigUint) -> Result<f64> {
        match self {
            Target::Gevrey { s } => Ok(s * big_ln(k)),
            Target::Sequence { sequence } => k
                .to_usize()
                .filter(|&p| p >= 1 && p <= sequence.truncation())
                .map(|p| sequence.logmu()[p])
                .ok_or_else(|| Error::OutOfRange(format!("quotient {k} of {} beyond its truncation", sequence.name()))),
        }
    }

    /// `log N_p` for `p` on or beyond the head.
    fn log_n(&self, p: &BigUint) -> Result<f64> {
        match self {
            Target::Gevrey { s } => Ok(s * ln_gamma(big_to_f64(p) + 1.0)),
            Target::Sequence { sequence } => p
                .to_usize()
                .filter(|&i| i <= sequence.truncation())
                .map(|i| sequence.logm()[i])
                .ok_or_else(|| Error::OutOfRange(format!("entry {p} of {} beyond its truncation", sequence.name()))),
        }
    }

    /// A finite sample of the target for window-based checks.
    pub fn sample(&self, truncation: usize) -> Result<LogSequence> {
        match self {
            Target::Gevrey { s } => LogSequence::gevrey(*s, truncation),
            Target::Sequence { sequence } => sequence.prefix(truncation),
        }
    }
}

fn log_nu_sample(n: &LogSequence, p: usize) -> f64 {
    n.logmu()[p]
}

/// Admissibility of the target: `liminf ν_{Qj}/ν_j > 1` for some `Q` and
/// `sup ν_{2j}/ν_j < ∞`. Witnesses `Q` (at least 3), `eps_hat` and `B`.
pub fn validate_target(n: &LogSequence, cfg: &RunConfig) -> Verdict {
    let p = n.first_infinite().map_or(n.truncation(), |i| i - 1);
    let win = Window::new(1.0, p as f64);
    if p < 64 {
        return Verdict::inconclusive(win, "fewer than 64 finite quotients");
    }
    let doubling: Vec<f64> = (1..=p / 2).map(|j| log_nu_sample(n, 2 * j) - log_nu_sample(n, j)).collect();
    let b = match trend::classify_sup(&doubling, Scale::Log, cfg.tolerances.stability) {
        SupTrend::Bounded { sup, .. } => sup.exp(),
        SupTrend::Unbounded { argmax, value, candidate } => {
            return Verdict::fails(
                win,
                Counterexample::at_index(argmax + 1, value, candidate).with_label("log nu_2j - log nu_j is unbounded"),
            )
        }
        SupTrend::Unclear { sup, .. } => {
            return Verdict::inconclusive(win, "sup of nu_2j / nu_j has not settled").with("B_estimate", sup.exp())
        }
    };
    let mut last = None;
    for q in 2..=8usize {
        let xs: Vec<f64> = (1..=p / q).map(|j| log_nu_sample(n, q * j) - log_nu_sample(n, j)).collect();
        let len = xs.len();
        let half = xs[len / 2..].iter().copied().fold(f64::INFINITY, f64::min);
        let quarter = xs[3 * len / 4..].iter().copied().fold(f64::INFINITY, f64::min);
        let steady = quarter >= half || trend::within(half, quarter, Scale::Log, cfg.tolerances.stability);
        if quarter > 0.0 && steady {
            let q_used = q.max(3);
            let margin = if q_used == q {
                half
            } else {
                let ys: Vec<f64> = (1..=p / q_used).map(|j| log_nu_sample(n, q_used * j) - log_nu_sample(n, j)).collect();
                ys[ys.len() / 2..].iter().copied().fold(f64::INFINITY, f64::min)
            };
            return Verdict::holds(win)
                .with("Q", q_used as f64)
                .with("Q_min", q as f64)
                .with("liminf_ratio", margin.exp())
                .with("eps_hat", (margin / 2.0).exp() - 1.0)
                .with("B", b);
        }
        last = Some((q, quarter));
    }
    let (q, quarter) = last.unwrap();
    Verdict::fails(
        win,
        Counterexample::at_index(p, quarter, 0.0).with_label(format!("liminf of log nu_Qj - log nu_j not positive up to Q = {q}")),
    )
    .with("B", b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageCase {
    /// `k_1 → k_2`, target `μ_{k_2} = ν_{k_2}/4`.
    First,
    /// `k_2 → k_3`, target `μ_{k_3} = 8 ν_{k_3}`.
    Second,
    /// Odd `j ≥ 3`: down to `ν_{k_{j+1}}/(j+1)`.
    CaseI,
    /// Even `j ≥ 4`: up to `2^{j+1} ν_{k_{j+1}}`.
    CaseII,
}

impl StageCase {
    fn of(j: usize) -> StageCase {
        match j {
            1 => StageCase::First,
            2 => StageCase::Second,
            _ if j % 2 == 1 => StageCase::CaseI,
            _ => StageCase::CaseII,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorPlan {
    pub target: Target,
    #[serde(rename = "Q")]
    pub q: u32,
    pub eps_hat: f64,
    /// Bound on `sup ν_{2j}/ν_j` used for the uniform cap.
    pub b: f64,
    /// `B^c` with `Q ≤ 2^c`.
    pub a_hat: f64,
    pub a_cap: f64,
    /// Number of anchors `k_1, …, k_J`.
    pub stages: usize,
    #[serde(with = "big_vec")]
    pub anchors: Vec<BigUint>,
    /// `n_1, …, n_{J-1}`.
    pub exponents: Vec<u64>,
    /// `log α_n` for `n = 0, …, n_1 + … + n_{J-1}`.
    pub log_alpha: Vec<f64>,
}

impl OscillatorPlan {
    pub fn alpha_min(&self) -> f64 {
        self.log_alpha.iter().copied().fold(f64::INFINITY, f64::min).exp()
    }

    pub fn alpha_max(&self) -> f64 {
        self.log_alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max).exp()
    }

    /// Index of the first `α` belonging to stage `j` (1-based).
    fn stage_start(&self, j: usize) -> usize {
        1 + self.exponents[..j - 1].iter().sum::<u64>() as usize
    }

    /// The constant `α` value of stage `j` on its non-special indices.
    pub fn stage_alpha(&self, j: usize) -> f64 {
        let first = self.stage_start(j);
        let idx = if j == 1 { first + 1 } else { first };
        self.log_alpha[idx.min(self.log_alpha.len() - 1)].exp()
    }
}

fn pow_q(q: u32, n: u64) -> BigUint {
    BigUint::from(q).pow(n as u32)
}

/// Choose the stage exponents and block values. `stages` counts anchors.
pub fn plan(target: &Target, q: u32, stages: usize, cfg: &RunConfig) -> Result<OscillatorPlan> {
    if q < 3 {
        return Err(Error::InvalidParameter(format!("Q = {q} must be at least 3")));
    }
    if stages < 2 {
        return Err(Error::InvalidParameter("at least two anchors are needed".into()));
    }
    let sample = target.sample(cfg.truncation.max(64 * q as usize))?;
    let check = validate_target(&sample, cfg);
    if check.status != Status::Holds {
        return Err(Error::NotAdmissible(format!(
            "{}: {}",
            target.label(),
            check.note.clone().unwrap_or_else(|| check.status.to_string())
        )));
    }
    let q_min = check.witness("Q_min").unwrap() as u32;
    if q < q_min {
        return Err(Error::NotAdmissible(format!("Q = {q} is below the smallest admissible value {q_min}")));
    }
    let eps_hat = if q == check.witness("Q").unwrap() as u32 {
        check.witness("eps_hat").unwrap()
    } else {
        let xs: Vec<f64> = (1..=sample.truncation() / q as usize)
            .map(|j| sample.logmu()[q as usize * j] - sample.logmu()[j])
            .collect();
        (xs[xs.len() / 2..].iter().copied().fold(f64::INFINITY, f64::min) / 2.0).exp() - 1.0
    };
    if !(eps_hat > 0.0) {
        return Err(Error::NotAdmissible(format!("eps_hat = {eps_hat} is not positive")));
    }
    let log_eps = eps_hat.ln_1p();
    let b = check.witness("B").unwrap().max(1.0);
    let c = (q as f64).log2().ceil();
    let a_hat = b.powf(c);
    let a_cap = 2.0 * a_hat;
    let nu = |k: &BigUint| target.log_nu(k);

    let k1 = BigUint::from(q);
    let log_nu_k1 = nu(&k1)?;
    let mut anchors = vec![k1.clone()];
    let mut exponents = Vec::new();
    let log_alpha0 = (4.0f64).ln() + 0.5 * log_nu_k1;
    let mut log_alpha = vec![log_alpha0];

    for j in 1..stages {
        let kj = anchors[j - 1].clone();
        let lnu_j = nu(&kj)?;
        let ratio = |n: u64| -> Result<f64> { Ok(nu(&(&kj * pow_q(q, n)))? - lnu_j) };
        let mut n = 2u64;
        let values: Vec<f64> = loop {
            if n > MAX_EXPONENT {
                return Err(Error::NotAdmissible(format!("stage {j}: no exponent up to {MAX_EXPONENT} works")));
            }
            let r = ratio(n)?;
            let nf = n as f64;
            let jf = j as f64;
            let candidate = match StageCase::of(j) {
                StageCase::First => {
                    if r > 64f64.ln() {
                        let v = (r - 64f64.ln()) / (nf - 1.0);
                        let mut out = vec![log_alpha0];
                        out.extend(std::iter::repeat_n(v, n as usize - 1));
                        Some(out)
                    } else {
                        None
                    }
                }
                StageCase::Second => {
                    let steady = (1..=8u64).try_fold(true, |ok, m| -> Result<bool> {
                        let k3 = &kj * pow_q(q, n);
                        Ok(ok && nu(&(&k3 * pow_q(q, m)))? - nu(&k3)? >= m as f64 * log_eps)
                    })?;
                    steady.then(|| vec![(32f64.ln() + r) / nf; n as usize])
                }
                StageCase::CaseI => {
                    let v = (r - jf * LN_2 - (jf + 1.0).ln()) / nf;
                    (nf * log_eps > jf * LN_2 + (jf + 1.0).ln() && v > 0.0).then(|| vec![v; n as usize])
                }
                StageCase::CaseII => {
                    let lift = (jf + 1.0) * LN_2 + jf.ln();
                    let v = (lift + r) / nf;
                    (lift / nf <= a_cap.ln() - a_hat.ln() && v <= a_cap.ln() && v > 0.0).then(|| vec![v; n as usize])
                }
            };
            if let Some(v) = candidate {
                break v;
            }
            n += 1;
        };
        exponents.push(n);
        log_alpha.extend(values);
        anchors.push(&kj * pow_q(q, n));
    }
    Ok(OscillatorPlan {
        target: target.clone(),
        q,
        eps_hat,
        b,
        a_hat,
        a_cap,
        stages,
        anchors,
        exponents,
        log_alpha,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub j: usize,
    #[serde(with = "crate::seqcore::big_string")]
    pub k: BigUint,
    pub log_mu: f64,
    pub log_nu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<StageCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorResult {
    pub plan: OscillatorPlan,
    pub sequence: BlockSequence,
    pub trace: Vec<StageRecord>,
}

impl OscillatorResult {
    /// `(p, log μ_p, log ν_p)` over the materialized head.
    pub fn head_tsv(&self) -> String {
        let head = &self.sequence.head;
        let mut out = String::from("p\tlog_mu\tlog_nu\n");
        for p in 1..=head.truncation() {
            let lnu = self.plan.target.log_nu(&BigUint::from(p)).unwrap_or(f64::NAN);
            out.push_str(&format!("{p}\t{}\t{lnu}\n", head.logmu()[p]));
        }
        out
    }

    /// `log μ_{k_j} − log ν_{k_j}` for every anchor.
    pub fn anchor_log_ratios(&self) -> Vec<(usize, f64)> {
        self.trace.iter().map(|r| (r.j, r.log_mu - r.log_nu)).collect()
    }
}

/// Materialize the blocks of a plan; the head runs to `min(head_len, k_3)`.
pub fn build(plan: &OscillatorPlan, head_len: usize) -> Result<OscillatorResult> {
    let q = plan.q;
    let qf = q as f64;
    let mut blocks = Vec::with_capacity(plan.log_alpha.len());
    for (n, la) in plan.log_alpha.iter().enumerate() {
        if !(*la > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha_{n} = {} is not above 1", la.exp())));
        }
        let start = if n == 0 { BigUint::one() } else { pow_q(q, n as u64) };
        let end = pow_q(q, n as u64 + 1) - 1u32;
        let log_beta = if n == 0 { la / (qf - 1.0) } else { la / (qf.powi(n as i32) * (qf - 1.0)) };
        blocks.push(Block { start, end, log_beta });
    }
    let k3 = &plan.anchors[plan.anchors.len().min(3) - 1];
    let limit = k3.to_usize().map_or(head_len, |c| c.min(head_len)).max(2);
    let mut logm = vec![0.0; limit + 1];
    let mut logmu = vec![0.0; limit + 1];
    let mut block = 0usize;
    let mut start = 1usize;
    let mut end = blocks[0].end.to_usize().unwrap_or(usize::MAX);
    let mut base = 0.0;
    for p in 2..=limit {
        let i = p - 1;
        while i > end {
            base += plan.log_alpha[block];
            block += 1;
            start = end + 1;
            end = blocks[block].end.to_usize().unwrap_or(usize::MAX);
        }
        logmu[p] = base + (i - start + 1) as f64 * blocks[block].log_beta;
        logm[p] = logm[p - 1] + logmu[p];
    }
    let head =
        LogSequence::with_quotients(format!("oscillating around {}", plan.target.label()), Provenance::Oscillator, logm, logmu)?;
    let origin = Anchor { index: BigUint::one(), log_mu: 0.0, log_m: 0.0 };
    let sequence = BlockSequence::new(head, origin, blocks)?;
    let mut trace = Vec::with_capacity(plan.anchors.len());
    for (i, k) in plan.anchors.iter().enumerate() {
        let j = i + 1;
        let (log_mu, _) = sequence.eval(k)?;
        trace.push(StageRecord {
            j,
            k: k.clone(),
            log_mu,
            log_nu: plan.target.log_nu(k)?,
            case: (j < plan.stages).then(|| StageCase::of(j)),
            n: plan.exponents.get(i).copied(),
        });
    }
    Ok(OscillatorResult { plan: plan.clone(), sequence, trace })
}

/// Expected `log μ_{k_j} − log ν_{k_j}` at anchor `j`.
pub fn anchor_identity(j: usize, log_nu_k1: f64) -> f64 {
    match j {
        1 => 4f64.ln() - 0.5 * log_nu_k1,
        2 => -(4f64.ln()),
        _ if j % 2 == 1 => j as f64 * LN_2,
        _ => -(j as f64).ln(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: BTreeMap<String, Verdict>,
}

impl VerifyReport {
    pub fn status(&self) -> Status {
        self.checks.values().fold(Status::Holds, |s, v| s.and(v.status))
    }
}

fn head_window(r: &OscillatorResult) -> Window {
    Window::new(1.0, r.sequence.head_len() as f64)
}

fn claim_one(r: &OscillatorResult) -> Verdict {
    let plan = &r.plan;
    let (lo, hi) = (plan.alpha_min().ln(), plan.alpha_max().ln());
    let tol = |x: f64| ANCHOR_TOL * x.abs().max(1.0);
    let q = plan.q as usize;
    let mu = r.sequence.head.logmu();
    let h = r.sequence.head_len();
    let mut checked = 0usize;
    for j in 1..=h / q {
        let d = mu[q * j] - mu[j];
        checked += 1;
        if d < lo - tol(d) || d > hi + tol(d) {
            return Verdict::fails(
                head_window(r),
                Counterexample::at_index(j, d.exp(), if d < lo { lo.exp() } else { hi.exp() })
                    .with_label("mu_Qj / mu_j outside [alpha_min, alpha_max]"),
            );
        }
    }
    let coverage = r.sequence.coverage();
    let mut at_anchors = 0usize;
    for n in 0..plan.log_alpha.len() as u64 {
        let base = pow_q(plan.q, n);
        for j in [base.clone(), &base + 1u32, &base * 2u32] {
            let qj = &j * plan.q;
            if qj > coverage {
                continue;
            }
            let (a, _) = r.sequence.eval(&j).unwrap();
            let (b, _) = r.sequence.eval(&qj).unwrap();
            let d = b - a;
            at_anchors += 1;
            if d < lo - tol(b) || d > hi + tol(b) {
                return Verdict::fails(
                    Window::new(1.0, big_to_f64(&coverage)),
                    Counterexample::at_argument(big_to_f64(&j), d.exp(), if d < lo { lo.exp() } else { hi.exp() })
                        .with_label("mu_Qj / mu_j outside [alpha_min, alpha_max] at a block index"),
                );
            }
        }
    }
    Verdict::holds(head_window(r))
        .with("alpha_min", lo.exp())
        .with("alpha_max", hi.exp())
        .with("head_indices", checked as f64)
        .with("block_indices", at_anchors as f64)
}

fn claim_two(r: &OscillatorResult) -> Verdict {
    let mu = r.sequence.head.logmu();
    for p in 2..mu.len() {
        if mu[p] <= mu[p - 1] {
            return Verdict::fails(
                head_window(r),
                Counterexample::at_index(p, mu[p - 1], mu[p]).with_label("quotients not strictly increasing"),
            );
        }
    }
    let lmin = r.plan.alpha_min().ln();
    for n in 1..=r.plan.log_alpha.len() as u64 {
        let (lm, _) = r.sequence.eval(&pow_q(r.plan.q, n)).unwrap();
        if lm < n as f64 * lmin - ANCHOR_TOL * lm.abs().max(1.0) {
            return Verdict::fails(
                head_window(r),
                Counterexample::at_index(n as usize, lm, n as f64 * lmin).with_label("mu_{Q^n} below alpha_min^n"),
            );
        }
    }
    let lc = check_sequence_condition(&r.sequence.head, SeqCondition::M1).map(|v| v.status).unwrap_or(Status::Fails);
    Verdict { status: lc, ..Verdict::holds(head_window(r)) }.with("log_mu_final", mu[mu.len() - 1])
}

fn anchor_identities(r: &OscillatorResult) -> Verdict {
    let lnu1 = r.trace[0].log_nu;
    let mut worst = 0.0f64;
    let mut out = Verdict::holds(Window::new(1.0, big_to_f64(&r.sequence.coverage())));
    for rec in &r.trace {
        let expected = anchor_identity(rec.j, lnu1);
        let got = rec.log_mu - rec.log_nu;
        let err = (got - expected).abs();
        worst = worst.max(err);
        out = out.with(&format!("ratio@{}", rec.j), got.exp());
        if err > ANCHOR_TOL {
            return Verdict::fails(
                out.window,
                Counterexample::at_index(rec.j, got, expected).with_label("log mu_k - log nu_k at anchor"),
            );
        }
    }
    out.with("max_error", worst)
}

fn moderate_growth(r: &OscillatorResult) -> Verdict {
    let head = &r.sequence.head;
    let (mu, lm) = (head.logmu(), head.logm());
    let cap = r.plan.alpha_max().ln();
    let mut doubling = f64::NEG_INFINITY;
    for j in 1..=head.truncation() / 2 {
        doubling = doubling.max(mu[2 * j] - mu[j]);
    }
    if doubling > cap + ANCHOR_TOL * cap.abs().max(1.0) {
        return Verdict::fails(head_window(r), Counterexample::at_index(0, doubling.exp(), cap.exp()).with_label("mu_2j / mu_j"));
    }
    let mut a = 0.0f64;
    for p in 1..=head.truncation() {
        let root = lm[p] / p as f64;
        if root > mu[p] + ANCHOR_TOL * mu[p].abs().max(1.0) {
            return Verdict::fails(head_window(r), Counterexample::at_index(p, root, mu[p]).with_label("M_p^(1/p) > mu_p"));
        }
        a = a.max(mu[p] - root);
    }
    Verdict::holds(head_window(r)).with("doubling_sup", doubling.exp()).with("alpha_max", cap.exp()).with("A_root", a.exp())
}

fn alpha_condition(r: &OscillatorResult) -> Verdict {
    let q = r.plan.q as usize;
    let mu = r.sequence.head.logmu();
    let h = r.sequence.head_len();
    let m = (1..=h / q).map(|j| mu[q * j] - mu[j]).fold(f64::INFINITY, f64::min);
    if m > 0.0 {
        Verdict::holds(head_window(r)).with("liminf_ratio", m.exp())
    } else {
        Verdict::fails(head_window(r), Counterexample::at_index(0, m.exp(), 1.0).with_label("mu_Qj / mu_j reaches 1"))
    }
}

fn oscillation(r: &OscillatorResult) -> Verdict {
    let points: Vec<(f64, f64)> =
        r.trace.iter().filter(|t| t.j >= 3).map(|t| (big_to_f64(&t.k), t.log_mu - t.log_nu)).collect();
    probe_anchors(&points).verdict
}

type Check = fn(&OscillatorResult) -> Verdict;

/// Run every verification check of a built oscillator.
pub fn verify(r: &OscillatorResult) -> VerifyReport {
    let checks: [(&str, Check); 6] = [
        ("claim_I_quotient_bounds", claim_one),
        ("claim_II_log_convex", claim_two),
        ("anchor_identities", anchor_identities),
        ("moderate_growth", moderate_growth),
        ("alpha_condition", alpha_condition),
        ("oscillation_probe", oscillation),
    ];
    let checks = checks.par_iter().map(|(k, f)| (k.to_string(), f(r))).collect();
    VerifyReport { checks }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalReport {
    pub plan: OscillatorPlan,
    pub trace: Vec<StageRecord>,
    pub verify: VerifyReport,
    pub checks: BTreeMap<String, Verdict>,
    pub head_relations: Vec<RelationReport>,
}

/// `(p, (log M_p − log N_p)/p)` at the given anchors.
fn root_ratios(r: &OscillatorResult, js: impl Iterator<Item = usize>) -> Result<Vec<(usize, f64, f64)>> {
    js.map(|j| {
        let k = &r.trace[j - 1].k;
        let (_, lm) = r.sequence.eval(k)?;
        let ln = r.plan.target.log_n(k)?;
        let kf = big_to_f64(k);
        Ok((j, kf, (lm - ln) / kf))
    })
    .collect()
}

/// The construction around `G^{1/2}` with the follow-up checks on `M`.
pub fn critical_case(stages: usize, cfg: &RunConfig) -> Result<CriticalReport> {
    if stages < 5 {
        return Err(Error::InvalidParameter(format!("critical case needs at least 5 anchors, got {stages}")));
    }
    let target = Target::Gevrey { s: 0.5 };
    let p = plan(&target, 3, stages, cfg)?;
    let k3 = p.anchors[2].to_usize().unwrap_or(usize::MAX);
    let r = build(&p, cfg.truncation.max(k3))?;
    let report = verify(&r);
    let mut checks = BTreeMap::new();
    let win = Window::new(1.0, big_to_f64(&r.sequence.coverage()));

    let even = root_ratios(&r, (4..=stages).step_by(2))?;
    let falling = even.windows(2).all(|w| w[1].2 < w[0].2);
    let mut v = if falling && even.last().is_some_and(|x| x.2 < 0.0) {
        Verdict::holds(win)
    } else {
        let (j, kf, x) = *even.last().unwrap();
        Verdict::fails(win, Counterexample::at_argument(kf, x, 0.0).with_label(format!("root ratio at anchor {j} does not keep falling")))
    };
    for (j, _, x) in &even {
        v = v.with(&format!("root_ratio@{j}"), x.exp());
    }
    checks.insert("liminf_root_ratio_to_zero".to_string(), v);

    let m0 = check_sequence_condition(&r.sequence.head, SeqCondition::M0)?;
    let mut lifts = Vec::new();
    for t in r.trace.iter().filter(|t| t.j >= 4 && t.j % 2 == 0) {
        let (_, lm) = r.sequence.eval(&t.k)?;
        let kf = big_to_f64(&t.k);
        lifts.push((t.j, kf, (kf + 1.0).ln() - lm / kf));
    }
    let rising = lifts.windows(2).all(|w| w[1].2 > w[0].2);
    let mut v = match (m0.status, rising) {
        (Status::Holds, _) => Verdict::fails(
            win,
            Counterexample::at_index(0, m0.witness("c").unwrap_or(0.0), 0.0).with_label("(M0) holds on the head"),
        ),
        (_, true) => Verdict::holds(win),
        (_, false) => {
            let (j, kf, x) = *lifts.last().unwrap();
            Verdict::inconclusive(win, format!("log(p+1) - log M_p / p stalls at anchor {j}")).with("p", kf).with("value", x)
        }
    };
    for (j, _, x) in &lifts {
        v = v.with(&format!("log(p+1)-logM/p@{j}"), *x);
    }
    checks.insert("M0_violated".to_string(), v);

    let all = root_ratios(&r, 3..=stages)?;
    let probe = probe_anchors(&all.iter().map(|(_, kf, x)| (*kf, *x)).collect::<Vec<_>>());
    checks.insert("incomparable_with_target".to_string(), probe.verdict.clone());

    checks.insert("omega_vs_square".to_string(), omega_vs_square(&r, stages)?);

    let n = target.sample(r.sequence.head_len())?;
    let head_relations = vec![
        seq_relate(&r.sequence.head, &n, Relation::Preceq, cfg.tolerances.stability)?,
        seq_relate(&n, &r.sequence.head, Relation::Preceq, cfg.tolerances.stability)?,
    ];
    Ok(CriticalReport { plan: p, trace: r.trace.clone(), verify: report, checks, head_relations })
}

/// `log ω_M(t) − log t²` at `t = μ_{k_j}`, where `ω_M(μ_k) = k log μ_k − log M_k`.
fn omega_vs_square(r: &OscillatorResult, stages: usize) -> Result<Verdict> {
    let mut points = Vec::new();
    for j in 3..=stages {
        let k = &r.trace[j - 1].k;
        let (lmu, lm) = r.sequence.eval(k)?;
        let omega = big_to_f64(k) * lmu - lm;
        points.push((lmu, omega.ln() - 2.0 * lmu));
    }
    Ok(probe_anchors(&points).verdict)
}

mod big_vec {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|n| n.to_str_radix(10)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|t| BigUint::parse_bytes(t.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("bad integer")))
            .collect()
    }
}
