use serde::Serialize;
use serde_json::{json, Value};

use ultragrowth_core::assocfn::{classify_triviality, omega_of_sequence, sequence_of_omega, Case, Triviality, WeightFn};
use ultragrowth_core::conjugate::{lemma_block, matrix_of_weight, young_conjugate};
use ultragrowth_core::lambdanorms::{empirical_domination, lambda_norm, CoefficientFamily, NormMode};
use ultragrowth_core::matrices::{relate_matrices, MatrixRelation, WeightMatrix};
use ultragrowth_core::oscillator::{build, plan, verify, Target};
use ultragrowth_core::relations::{crosscheck_transfer, seq_relate, Relation};
use ultragrowth_core::seqcore::{check_sequence_condition, SeqCondition};
use ultragrowth_core::weightspec::WeightSpec;
use ultragrowth_core::{LogSequence, Result, RunConfig, Status};

pub const SUITES: [&str; 2] = ["paper-claims", "invariants"];

#[derive(Debug, Serialize)]
pub struct Entry {
    pub id: &'static str,
    pub claim: &'static str,
    pub status: Status,
    pub details: Value,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub status: Status,
    pub entries: Vec<Entry>,
}

type Check = fn(&RunConfig) -> Result<(Status, Value)>;

fn all(statuses: impl IntoIterator<Item = Status>) -> Status {
    statuses.into_iter().fold(Status::Holds, Status::and)
}

fn pass(ok: bool) -> Status {
    if ok {
        Status::Holds
    } else {
        Status::Fails
    }
}

const GEVREY: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

fn round_trip(cfg: &RunConfig) -> Result<(Status, Value)> {
    let mut errs = Vec::new();
    for s in GEVREY {
        let m = LogSequence::gevrey(s, 512)?;
        let back = sequence_of_omega(&WeightFn::associated(m.clone()), 512, cfg)?;
        let err = m.logm().iter().zip(back.logm()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        errs.push((s, err));
    }
    let ok = errs.iter().all(|e| e.1 <= cfg.tolerances.roundtrip_tol);
    Ok((pass(ok), json!({ "max_abs_error": errs })))
}

fn trunc_log_exact(cfg: &RunConfig) -> Result<(Status, Value)> {
    let w = WeightFn::trunc_log();
    let zeros = [0.0, 0.5, 1.0].iter().map(|&s| young_conjugate(&w, s, cfg)).collect::<Result<Vec<_>>>()?;
    let infs = [1.01, 2.0, 10.0].iter().map(|&s| young_conjugate(&w, s, cfg)).collect::<Result<Vec<_>>>()?;
    let m = matrix_of_weight(&w, &[1.0], 64, cfg)?;
    let row = m.entry(1.0).unwrap().logm();
    let ok = zeros.iter().all(|v| *v == 0.0)
        && infs.iter().all(|v| *v == f64::INFINITY)
        && row[..2] == [0.0, 0.0]
        && row[2..].iter().all(|v| *v == f64::INFINITY);
    Ok((pass(ok), json!({ "finite_entries": row.iter().filter(|v| v.is_finite()).count() })))
}

fn lemma_square(cfg: &RunConfig) -> Result<(Status, Value)> {
    let r = lemma_block(&WeightFn::power(2.0)?, cfg)?;
    let status = all(r.checks.values().map(|v| v.status));
    let details: serde_json::Map<String, Value> =
        r.checks.iter().map(|(k, v)| (k.clone(), json!(v.status))).collect();
    Ok((status, Value::Object(details)))
}

fn critical_equivalence(cfg: &RunConfig) -> Result<(Status, Value)> {
    let w = matrix_of_weight(&WeightFn::power(2.0)?, &cfg.lambdas, 1024, cfg)?;
    let g = WeightMatrix::constant("G^0.5", &LogSequence::gevrey(0.5, 1024)?, &cfg.lambdas)?;
    let fwd = relate_matrices(&w, &g, MatrixRelation::Roumieu, cfg)?;
    let back = relate_matrices(&g, &w, MatrixRelation::Roumieu, cfg)?;
    let finite = |v: &ultragrowth_core::Verdict| {
        v.witness.iter().filter(|(k, _)| k.starts_with("C@")).all(|(_, c)| c.is_finite())
    };
    let big = LogSequence::gevrey(0.5, 1 << 20)?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..=200 {
        let t = 10f64.powf(1.0 + 2.0 * i as f64 / 200.0);
        let r = omega_of_sequence(&big, t)?.value / (t * t);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let status = all([fwd.status, back.status, pass(finite(&fwd) && finite(&back) && lo > 0.0 && hi.is_finite())]);
    Ok((status, json!({ "square_to_gevrey": fwd.status, "gevrey_to_square": back.status, "band": [lo, hi] })))
}

fn oscillator_eight(cfg: &RunConfig) -> Result<ultragrowth_core::oscillator::OscillatorResult> {
    let p = plan(&Target::Gevrey { s: 0.5 }, 3, 8, cfg)?;
    build(&p, 1 << 18)
}

fn anchor_identities(cfg: &RunConfig) -> Result<(Status, Value)> {
    let r = oscillator_eight(cfg)?;
    let v = verify(&r);
    let a = &v.checks["anchor_identities"];
    let c = &v.checks["claim_I_quotient_bounds"];
    Ok((a.status.and(c.status), json!({ "max_error": a.witness("max_error"), "claim_I": c.status })))
}

fn oscillation(cfg: &RunConfig) -> Result<(Status, Value)> {
    let r = oscillator_eight(cfg)?;
    let ratios: Vec<f64> = r.anchor_log_ratios().iter().filter(|x| x.0 >= 3).map(|x| x.1.exp()).collect();
    let alternate = ratios
        .iter()
        .enumerate()
        .all(|(i, &x)| if i % 2 == 0 { x >= 8.0 * (1.0 - 1e-9) } else { x <= 0.25 * (1.0 + 1e-9) });
    let m = &r.sequence.head;
    let n = LogSequence::gevrey(0.5, m.truncation())?;
    let mn = seq_relate(m, &n, Relation::Preceq, cfg.tolerances.stability)?.verdict.status;
    let nm = seq_relate(&n, m, Relation::Preceq, cfg.tolerances.stability)?.verdict.status;
    let ok = alternate && mn != Status::Holds && nm != Status::Holds;
    Ok((pass(ok), json!({ "ratios": ratios, "M_preceq_N": mn, "N_preceq_M": nm })))
}

fn gevrey_matrix(_: &RunConfig) -> Result<(Status, Value)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for s in GEVREY {
        let g = LogSequence::gevrey(s, 4096)?;
        let st = |c| check_sequence_condition(&g, c).map(|v| v.status);
        let m2 = check_sequence_condition(&g, SeqCondition::M2)?;
        let c = m2.witness("C").unwrap_or(f64::NAN);
        let nqa = st(SeqCondition::NonQuasianalytic)?;
        let m0 = st(SeqCondition::M0)?;
        ok &= st(SeqCondition::M1)? == Status::Holds && st(SeqCondition::Algebra)? == Status::Holds;
        ok &= m2.status == Status::Holds && (c / 2f64.powf(s) - 1.0).abs() <= 0.01;
        ok &= nqa == if s <= 1.0 { Status::Fails } else { Status::Holds };
        if s == 0.5 {
            ok &= m0 == Status::Fails;
        } else if s == 1.0 {
            ok &= m0 == Status::Holds;
        }
        rows.push(json!({ "s": s, "M2_C": c, "nonquasianalytic": nqa, "M0": m0 }));
    }
    Ok((pass(ok), json!(rows)))
}

fn transfer(cfg: &RunConfig) -> Result<(Status, Value)> {
    let family = GEVREY.iter().map(|&s| LogSequence::gevrey(s, 1 << 20)).collect::<Result<Vec<_>>>()?;
    let mut statuses = Vec::new();
    let mut rows = Vec::new();
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            if i != j {
                let r = crosscheck_transfer(a, b, cfg)?;
                statuses.push(r.verdict.status);
                rows.push(json!({ "pair": [GEVREY[i], GEVREY[j]], "agreement": r.verdict.status }));
            }
        }
    }
    Ok((all(statuses), json!(rows)))
}

fn triviality(cfg: &RunConfig) -> Result<(Status, Value)> {
    let cases = [(2.0, Case::Beurling, Triviality::Trivial), (1.5, Case::Beurling, Triviality::Nontrivial),
        (2.0, Case::Roumieu, Triviality::Nontrivial), (2.5, Case::Roumieu, Triviality::Trivial)];
    let mut ok = true;
    let mut rows = Vec::new();
    for (a, case, expected) in cases {
        let r = classify_triviality(&WeightFn::power(a)?, case, cfg);
        ok &= r.verdict == expected;
        rows.push(json!({ "weight": format!("t^{a}"), "case": case, "verdict": r.verdict }));
    }
    Ok((pass(ok), json!(rows)))
}

fn witness_mechanics(cfg: &RunConfig) -> Result<(Status, Value)> {
    let (sq, p15) = (WeightFn::power(2.0)?, WeightFn::power(1.5)?);
    let fwd = empirical_domination(&sq, &p15, cfg);
    let back = empirical_domination(&p15, &sq, cfg);
    let a = fwd.verdict.witness("a").unwrap_or(f64::INFINITY);
    let ok = fwd.verdict.status == Status::Holds && a <= 1.1 && back.verdict.status == Status::Fails;
    Ok((pass(ok), json!({ "forward": fwd.verdict.witness, "reverse": back.verdict.status })))
}

fn gevrey_basics(_: &RunConfig) -> Result<(Status, Value)> {
    let mut statuses = Vec::new();
    for s in [0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
        let g = LogSequence::gevrey(s, 2048)?;
        for c in [SeqCondition::M1, SeqCondition::Normalized, SeqCondition::Algebra, SeqCondition::LC] {
            statuses.push(check_sequence_condition(&g, c)?.status);
        }
    }
    let n = statuses.len();
    Ok((all(statuses), json!({ "checks": n })))
}

fn spec_round_trip(_: &RunConfig) -> Result<(Status, Value)> {
    let texts = ["t^2", "t^0.5", "log1p", "logtrunc", "gevrey:0.5", "assoc:m.json"];
    let ok = texts.iter().all(|t| t.parse::<WeightSpec>().map(|s| s.to_string() == *t).unwrap_or(false));
    Ok((pass(ok), json!(texts)))
}

fn anchors_up_to_twelve(cfg: &RunConfig) -> Result<(Status, Value)> {
    let mut statuses = Vec::new();
    for j in 3..=12 {
        let r = build(&plan(&Target::Gevrey { s: 0.5 }, 3, j, cfg)?, 1024)?;
        statuses.push(verify(&r).checks["anchor_identities"].status);
    }
    Ok((all(statuses), json!({ "stages": "3..=12" })))
}

fn norm_cancellation(cfg: &RunConfig) -> Result<(Status, Value)> {
    let mut values = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        let w = WeightFn::power(a)?;
        values.push(lambda_norm(&CoefficientFamily::witness(w.clone(), cfg.norm_support), &w, NormMode::Roumieu(1), cfg).value);
    }
    Ok((pass(values.iter().all(|v| *v == 1.0)), json!(values)))
}

fn registry(suite: &str) -> Option<Vec<(&'static str, &'static str, Check)>> {
    let claims: Vec<(&'static str, &'static str, Check)> = vec![
        ("round_trip_identity", "recovering a log-convex sequence from its associated function", round_trip),
        ("trunc_log_exactness", "conjugate and matrix of the truncated logarithm", trunc_log_exact),
        ("lemma_block_square", "structural properties of the matrix generated by t^2", lemma_square),
        ("critical_equivalence", "t^2 matrix against the constant G^(1/2) matrix", critical_equivalence),
        ("oscillator_anchor_identities", "anchor ratios and quotient bounds of the oscillating sequence", anchor_identities),
        ("oscillation_probe", "alternating anchor ratios and incomparability on the head", oscillation),
        ("gevrey_condition_matrix", "standard conditions across the Gevrey family", gevrey_matrix),
        ("transfer_crosscheck", "sequence and associated-function relations agree", transfer),
        ("triviality_classifier", "trivial Gelfand-Shilov spaces around t^2", triviality),
        ("witness_mechanics", "norm bound on a witness sequence gives an affine weight bound", witness_mechanics),
    ];
    match suite {
        "paper-claims" => Some(claims),
        "invariants" => Some(vec![
            ("lemma_block_square", "structural properties of the matrix generated by t^2", lemma_square as Check),
            ("gevrey_basics", "log-convexity, normalization and algebra for Gevrey sequences", gevrey_basics),
            ("weight_spec_round_trip", "weight specs render and parse back", spec_round_trip),
            ("anchor_identities_to_twelve", "closed-form anchors for up to twelve stages", anchors_up_to_twelve),
            ("norm_cancellation", "witness coefficients have unit norm at j = 1", norm_cancellation),
        ]),
        _ => None,
    }
}

pub fn run(suite: &str, cfg: &RunConfig) -> Option<Report> {
    let checks = registry(suite)?;
    let mut entries = Vec::with_capacity(checks.len());
    for (id, claim, check) in checks {
        let (status, details) = match check(cfg) {
            Ok(x) => x,
            Err(e) => (Status::Fails, json!({ "error": e.to_string() })),
        };
        entries.push(Entry { id, claim, status, details });
    }
    let status = all(entries.iter().map(|e| e.status));
    Some(Report { suite: suite.to_string(), status, entries })
}
