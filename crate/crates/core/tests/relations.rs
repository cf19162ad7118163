use proptest::prelude::*;
use ultragrowth_core::assocfn::WeightFn;
use ultragrowth_core::relations::{crosscheck_transfer, oscillation_probe, probe_anchors, seq_relate, wf_relate, Relation};
use ultragrowth_core::trend::STABILITY;
use ultragrowth_core::{LogSequence, RunConfig, Status};

fn g(s: f64) -> LogSequence {
    LogSequence::gevrey(s, 4096).unwrap()
}

#[test]
fn gevrey_half_is_dominated_by_gevrey_one() {
    let r = seq_relate(&g(0.5), &g(1.0), Relation::Preceq, STABILITY).unwrap();
    assert_eq!(r.verdict.status, Status::Holds);
    assert!((r.verdict.witness("C").unwrap() - 1.0).abs() < 1e-12);
    assert!(r.liminf_est <= r.limsup_est);
    let strict = seq_relate(&g(0.5), &g(1.0), Relation::Triangleleft, STABILITY).unwrap();
    assert_eq!(strict.verdict.status, Status::Holds);
    let back = seq_relate(&g(1.0), &g(0.5), Relation::Preceq, STABILITY).unwrap();
    assert_eq!(back.verdict.status, Status::Fails);
    let cx = back.verdict.counterexample.unwrap();
    assert!(cx.value > cx.bound);
}

#[test]
fn stirling_oracle_matches_the_root_ratio_trace() {
    let r = seq_relate(&g(0.5), &g(1.0), Relation::Preceq, STABILITY).unwrap();
    for &(p, ratio) in r.ratio_trace.iter().skip(99).step_by(500) {
        let stirling = -0.5 * (p.ln() - 1.0 + (2.0 * std::f64::consts::PI * p).ln() / (2.0 * p));
        assert!((ratio.ln() - stirling).abs() < 1e-3 / p, "p = {p}");
    }
}

#[test]
fn equivalence_is_reflexive_with_unit_constant() {
    let r = seq_relate(&g(0.5), &g(0.5), Relation::Equiv, STABILITY).unwrap();
    assert_eq!(r.verdict.status, Status::Holds);
    assert_eq!(r.verdict.witness("M<=N.C"), Some(1.0));
    assert_eq!(r.liminf_est, 1.0);
    assert_eq!(r.limsup_est, 1.0);
}

#[test]
fn weight_function_relations() {
    let cfg = RunConfig::default();
    let sq = WeightFn::power(2.0).unwrap();
    let p15 = WeightFn::power(1.5).unwrap();
    assert_eq!(wf_relate(&sq, &sq, Relation::Sim, &cfg).unwrap().verdict.status, Status::Holds);
    assert_eq!(wf_relate(&sq, &p15, Relation::Preceq, &cfg).unwrap().verdict.status, Status::Holds);
    assert_eq!(wf_relate(&sq, &p15, Relation::Triangleleft, &cfg).unwrap().verdict.status, Status::Holds);
    let back = wf_relate(&p15, &sq, Relation::Preceq, &cfg).unwrap();
    assert_eq!(back.verdict.status, Status::Fails);
    assert!(back.verdict.counterexample.unwrap().argument.is_some());
}

#[test]
fn transfer_crosscheck_agrees_on_all_gevrey_pairs() {
    let cfg = RunConfig::default();
    let family: Vec<(f64, LogSequence)> =
        [0.25, 0.5, 1.0, 2.0].into_iter().map(|s| (s, LogSequence::gevrey(s, 1 << 20).unwrap())).collect();
    for (a, ma) in &family {
        for (b, mb) in &family {
            if a == b {
                continue;
            }
            let r = crosscheck_transfer(ma, mb, &cfg).unwrap();
            assert_eq!(r.verdict.status, Status::Holds, "G^{a} vs G^{b}: {:#?}", r.sides);
            for side in &r.sides {
                assert_ne!(side.sequence_side, Status::Inconclusive, "G^{a} vs G^{b} {}", side.relation);
                assert_eq!(side.sequence_side, side.function_side, "G^{a} vs G^{b} {}", side.relation);
            }
        }
    }
}

#[test]
fn transfer_crosscheck_is_reflexive() {
    let r = crosscheck_transfer(&g(0.5), &g(0.5), &RunConfig::default()).unwrap();
    assert_eq!(r.verdict.status, Status::Holds);
    let f = &r.sides[0].function_verdict;
    assert_eq!(f.witness("A"), Some(1.0));
    assert_eq!(f.witness("B"), Some(0.0));
}

#[test]
fn probe_on_monotone_pairs() {
    let same = oscillation_probe(&g(0.5), &g(0.5)).unwrap();
    assert_eq!(same.liminf_est, 1.0);
    assert_eq!(same.limsup_est, 1.0);
    assert_ne!(same.verdict.status, Status::Holds);
    let r = oscillation_probe(&g(0.5), &g(1.0)).unwrap();
    assert!(r.limsup_est <= 1.0);
    assert!(r.liminf_est < 0.05);
    assert_eq!(r.verdict.status, Status::Fails);
}

#[test]
fn probe_accepts_a_widening_oscillation() {
    let pts: Vec<(f64, f64)> = (3..=8)
        .map(|j| (j as f64, if j % 2 == 1 { j as f64 * 2f64.ln() } else { -(j as f64).ln() }))
        .collect();
    assert_eq!(probe_anchors(&pts).verdict.status, Status::Holds);
    assert_eq!(probe_anchors(&pts[..3]).verdict.status, Status::Inconclusive);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn geometric_rescaling_never_flips_domination(s in 0.3f64..2.0, t in 0.3f64..2.0, log_c in -3.0f64..3.0) {
        let (m, n) = (LogSequence::gevrey(s, 1024).unwrap(), LogSequence::gevrey(t, 1024).unwrap());
        let base = seq_relate(&m, &n, Relation::Preceq, STABILITY).unwrap().verdict;
        let scaled = seq_relate(&m, &n.scaled(log_c).unwrap(), Relation::Preceq, STABILITY).unwrap().verdict;
        prop_assert_eq!(base.status, scaled.status);
        if let (Some(c0), Some(c1)) = (base.witness("C"), scaled.witness("C")) {
            prop_assert!((c1 / c0 - (-log_c).exp()).abs() < 1e-9 * c1.max(1.0));
        }
    }

    #[test]
    fn strict_domination_implies_domination(s in 0.2f64..2.5, t in 0.2f64..2.5) {
        let (m, n) = (LogSequence::gevrey(s, 1024).unwrap(), LogSequence::gevrey(t, 1024).unwrap());
        if seq_relate(&m, &n, Relation::Triangleleft, STABILITY).unwrap().verdict.is_holds() {
            prop_assert!(seq_relate(&m, &n, Relation::Preceq, STABILITY).unwrap().verdict.is_holds());
        }
    }

    #[test]
    fn domination_composes(s in 0.2f64..1.0, t in 1.0f64..1.6, u in 1.6f64..2.5) {
        let (a, b, c) = (
            LogSequence::gevrey(s, 1024).unwrap(),
            LogSequence::gevrey(t, 1024).unwrap(),
            LogSequence::gevrey(u, 1024).unwrap(),
        );
        let ab = seq_relate(&a, &b, Relation::Preceq, STABILITY).unwrap().verdict;
        let bc = seq_relate(&b, &c, Relation::Preceq, STABILITY).unwrap().verdict;
        let ac = seq_relate(&a, &c, Relation::Preceq, STABILITY).unwrap().verdict;
        prop_assert!(ab.is_holds() && bc.is_holds() && ac.is_holds());
        prop_assert!(ac.witness("C").unwrap() <= ab.witness("C").unwrap() * bc.witness("C").unwrap() * (1.0 + 1e-12));
    }
}
