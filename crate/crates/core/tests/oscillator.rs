use num_bigint::BigUint;
use proptest::prelude::*;
use ultragrowth_core::oscillator::{anchor_identity, build, critical_case, plan, validate_target, verify, Target};
use ultragrowth_core::relations::{seq_relate, Relation};
use ultragrowth_core::{Error, LogSequence, Provenance, RunConfig, Status};

fn cfg() -> RunConfig {
    RunConfig::default()
}

fn half() -> Target {
    Target::Gevrey { s: 0.5 }
}

/// Smallest `n >= lo` with `pred(n)`.
fn first(lo: u32, pred: impl Fn(u32) -> bool) -> u32 {
    (lo..).find(|&n| pred(n)).unwrap()
}

#[test]
fn gevrey_half_is_an_admissible_target() {
    let v = validate_target(&LogSequence::gevrey(0.5, 4096).unwrap(), &cfg());
    assert_eq!(v.status, Status::Holds, "{v:?}");
    assert_eq!(v.witness("Q"), Some(3.0));
    assert!((v.witness("liminf_ratio").unwrap() - 3f64.sqrt()).abs() < 1e-9);
    assert!((v.witness("B").unwrap() - 2f64.sqrt()).abs() < 1e-9);
    assert_eq!(validate_target(&LogSequence::gevrey(1.0, 4096).unwrap(), &cfg()).status, Status::Holds);
}

#[test]
fn geometric_quotients_are_not_admissible() {
    let logm: Vec<f64> = (0..=2048).map(|p| (p * (p + 1) / 2) as f64 * std::f64::consts::LN_2).collect();
    let m = LogSequence::new("geometric", Provenance::Explicit, logm).unwrap();
    let v = validate_target(&m, &cfg());
    assert_eq!(v.status, Status::Fails, "{v:?}");
    assert!(matches!(plan(&Target::Sequence { sequence: m }, 3, 4, &cfg()), Err(Error::NotAdmissible(_))));
}

#[test]
fn plan_for_the_critical_sequence() {
    let p = plan(&half(), 3, 8, &cfg()).unwrap();
    let n1 = first(2, |n| 3f64.sqrt().powi(n as i32) > 64.0);
    assert_eq!(p.exponents[0], n1 as u64);
    assert_eq!(p.exponents[1], 2);
    assert_eq!(p.anchors[0], BigUint::from(3u32));
    assert_eq!(p.anchors[1], BigUint::from(3u32).pow(n1 + 1));
    assert_eq!(p.anchors[2], BigUint::from(177_147u32));
    assert!((p.log_alpha[0].exp() - 4.0 * 3f64.powf(0.25)).abs() < 1e-12);
    assert!(p.log_alpha.iter().all(|&a| a > 0.0));
    for j in 0..p.exponents.len() {
        assert_eq!(&p.anchors[j] * BigUint::from(3u32).pow(p.exponents[j] as u32), p.anchors[j + 1]);
    }
    let eps = p.eps_hat.ln_1p();
    for (i, &n) in p.exponents.iter().enumerate().skip(2) {
        let j = i as f64 + 1.0;
        if i % 2 == 0 {
            let need = j * std::f64::consts::LN_2 + (j + 1.0).ln();
            assert_eq!(n as u32, first(2, |m| m as f64 * eps > need), "stage {j}");
        } else {
            let lift = (j + 1.0) * std::f64::consts::LN_2 + j.ln();
            assert_eq!(n as u32, first(2, |m| lift / m as f64 <= (p.a_cap / p.a_hat).ln()), "stage {j}");
        }
    }
}

#[test]
fn head_hits_the_first_targets() {
    let p = plan(&half(), 3, 8, &cfg()).unwrap();
    let r = build(&p, 1 << 20).unwrap();
    let mu = r.sequence.head.logmu();
    assert_eq!(r.sequence.head_len(), 177_147);
    assert_eq!(mu[1], 0.0);
    let k2 = 19_683usize;
    assert!((mu[k2] - (0.5 * (k2 as f64).ln() - 4f64.ln())).abs() < 1e-12 * mu[k2]);
    let k3 = 177_147usize;
    assert!((mu[k3] - (0.5 * (k3 as f64).ln() + 8f64.ln())).abs() < 1e-12 * mu[k3]);
}

#[test]
fn verification_passes_for_eight_anchors() {
    let p = plan(&half(), 3, 8, &cfg()).unwrap();
    let r = build(&p, 1 << 18).unwrap();
    let report = verify(&r);
    for (k, v) in &report.checks {
        assert_eq!(v.status, Status::Holds, "{k}: {v:?}");
    }
    let ratios: Vec<f64> = r.anchor_log_ratios().iter().skip(2).map(|x| x.1.exp()).collect();
    for (i, x) in ratios.iter().enumerate() {
        if i % 2 == 0 {
            assert!(*x >= 8.0 * (1.0 - 1e-9), "{ratios:?}");
        } else {
            assert!(*x <= 0.25 * (1.0 + 1e-9), "{ratios:?}");
        }
    }
}

#[test]
fn head_is_incomparable_with_the_target() {
    let cfg = cfg();
    let r = build(&plan(&half(), 3, 8, &cfg).unwrap(), 1 << 18).unwrap();
    let m = &r.sequence.head;
    let n = LogSequence::gevrey(0.5, m.truncation()).unwrap();
    for (a, b) in [(m, &n), (&n, m)] {
        let v = seq_relate(a, b, Relation::Preceq, cfg.tolerances.stability).unwrap();
        assert_ne!(v.verdict.status, Status::Holds, "{v:?}");
    }
}

#[test]
fn critical_case_checks() {
    let c = critical_case(8, &cfg()).unwrap();
    for (k, v) in &c.checks {
        assert_eq!(v.status, Status::Holds, "{k}: {v:?}");
    }
    assert_eq!(c.verify.status(), Status::Holds);
    assert!(matches!(critical_case(4, &cfg()), Err(Error::InvalidParameter(_))));
}

#[test]
fn sampled_target_stops_at_its_truncation() {
    let t = Target::Sequence { sequence: LogSequence::gevrey(0.5, 4096).unwrap() };
    assert!(matches!(plan(&t, 3, 4, &cfg()), Err(Error::OutOfRange(_))));
    assert!(matches!(plan(&half(), 2, 4, &cfg()), Err(Error::InvalidParameter(_))));
}

#[test]
fn plan_json_round_trip() {
    let p = plan(&half(), 3, 6, &cfg()).unwrap();
    let back = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(p, back);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn anchor_identities_hold_without_materialization(s in 0.3f64..2.0, q in 3u32..6, stages in 3usize..=12) {
        let p = plan(&Target::Gevrey { s }, q, stages, &cfg()).unwrap();
        let r = build(&p, 4096).unwrap();
        let lnu1 = s * (q as f64).ln();
        for t in &r.trace {
            prop_assert!((t.log_mu - t.log_nu - anchor_identity(t.j, lnu1)).abs() <= 1e-9, "anchor {}", t.j);
        }
        let v = &verify(&r).checks["anchor_identities"];
        prop_assert_eq!(v.status, Status::Holds);
    }

    #[test]
    fn claim_one_bounds_and_tiling(s in 0.3f64..2.0, q in 3u32..6, seed in 1u64..1_000_000) {
        let p = plan(&Target::Gevrey { s }, q, 6, &cfg()).unwrap();
        let r = build(&p, 2048).unwrap();
        let seq = &r.sequence;
        prop_assert_eq!(&seq.blocks[0].start, &BigUint::from(1u32));
        for w in seq.blocks.windows(2) {
            prop_assert_eq!(&w[0].end + 1u32, w[1].start.clone());
        }
        prop_assert_eq!(&seq.blocks.last().unwrap().end + 1u32, p.anchors.last().unwrap().clone());
        // mu_Qj / mu_j is a product of j(Q-1) consecutive factors.
        let j = BigUint::from(seed) % (p.anchors.last().unwrap() / q) + 1u32;
        let qj = &j * q;
        let mut count = BigUint::from(0u32);
        let mut log_ratio = 0.0;
        for b in &seq.blocks {
            let lo = if b.start > j { b.start.clone() } else { j.clone() };
            let hi = if b.end < &qj - 1u32 { b.end.clone() } else { &qj - 1u32 };
            if lo <= hi {
                let len = &hi - &lo + 1u32;
                log_ratio += ultragrowth_core::seqcore::big_to_f64(&len) * b.log_beta;
                count += len;
            }
        }
        prop_assert_eq!(count, &j * (q - 1));
        let direct = seq.eval(&qj).unwrap().0 - seq.eval(&j).unwrap().0;
        prop_assert!((direct - log_ratio).abs() <= 1e-9 * direct.abs().max(1.0));
        prop_assert!(direct >= p.alpha_min().ln() - 1e-9 && direct <= p.alpha_max().ln() + 1e-9);
        for i in 1..=seq.head_len().min(512) {
            let e = seq.eval_u64(i as u64).unwrap();
            prop_assert!((e.0 - seq.head.logmu()[i]).abs() <= 1e-9 * e.0.abs().max(1.0));
        }
    }
}
