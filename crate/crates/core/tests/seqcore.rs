use ultragrowth_core::seqcore::{check_lc, check_sequence_condition, SeqCondition};
use ultragrowth_core::{LogSequence, Provenance, Status};

fn log_factorial(p: usize) -> f64 {
    (2..=p).map(|k| (k as f64).ln()).sum()
}

fn status(m: &LogSequence, c: SeqCondition) -> Status {
    check_sequence_condition(m, c).unwrap().status
}

#[test]
fn gevrey_condition_matrix() {
    for s in [0.25, 0.5, 1.0, 2.0] {
        let g = LogSequence::gevrey(s, 4096).unwrap();
        for c in [SeqCondition::M1, SeqCondition::Algebra, SeqCondition::Normalized, SeqCondition::M2Prime, SeqCondition::LC] {
            assert_eq!(status(&g, c), Status::Holds, "s = {s}, {c}");
        }
        let m2 = check_sequence_condition(&g, SeqCondition::M2).unwrap();
        assert_eq!(m2.status, Status::Holds, "M2 for s = {s}: {m2:?}");
        let c = m2.witness("C").unwrap();
        let target = 2f64.powf(s);
        assert!(c <= target * (1.0 + 1e-9) && c >= target * 0.99, "s = {s}: C = {c}");
    }
}

#[test]
fn m2_constant_matches_brute_force_oracle() {
    let p_max = 512;
    let g = LogSequence::gevrey(0.5, p_max).unwrap();
    let mut oracle = f64::NEG_INFINITY;
    for p in 0..=p_max {
        for q in 0..=(p_max - p) {
            let n = p + q;
            if n == 0 {
                continue;
            }
            let v = 0.5 * (log_factorial(n) - log_factorial(p) - log_factorial(q)) / n as f64;
            oracle = oracle.max(v);
        }
    }
    let v = check_sequence_condition(&g, SeqCondition::M2).unwrap();
    assert!((v.witness("C").unwrap().ln() - oracle).abs() < 1e-9);
    assert!(oracle.exp() <= 2f64.sqrt());
}

#[test]
fn quasianalyticity_split_of_the_gevrey_family() {
    for (s, expected) in [(0.25, Status::Fails), (0.5, Status::Fails), (1.0, Status::Fails), (2.0, Status::Holds)] {
        let g = LogSequence::gevrey(s, 4096).unwrap();
        assert_eq!(status(&g, SeqCondition::NonQuasianalytic), expected, "s = {s}");
    }
}

#[test]
fn m0_separates_half_from_one() {
    assert_eq!(status(&LogSequence::gevrey(0.5, 4096).unwrap(), SeqCondition::M0), Status::Fails);
    let g1 = check_sequence_condition(&LogSequence::gevrey(1.0, 4096).unwrap(), SeqCondition::M0).unwrap();
    assert_eq!(g1.status, Status::Holds);
    let c = g1.witness("c").unwrap();
    assert!(c > 0.3 && c <= 1.0, "c = {c}");
}

#[test]
fn constant_sequence_is_not_lc() {
    let m = LogSequence::new("one", Provenance::Explicit, vec![0.0; 4097]).unwrap();
    let v = check_lc(&m).unwrap();
    assert_eq!(v.status, Status::Fails);
    assert!(v.counterexample.is_some());
}

#[test]
fn quadratic_exponent_breaks_moderate_growth_but_not_m2_prime() {
    let logm: Vec<f64> = (0..=2048).map(|p| (p * p) as f64).collect();
    let m = LogSequence::new("exp(p^2)", Provenance::Explicit, logm).unwrap();
    assert_eq!(status(&m, SeqCondition::M2Prime), Status::Holds);
    let v = check_sequence_condition(&m, SeqCondition::M2).unwrap();
    assert_eq!(v.status, Status::Fails);
    let cx = v.counterexample.unwrap();
    let (p, q) = (cx.index.unwrap() as f64, cx.second_index.unwrap() as f64);
    assert!((2.0 * p * q) / (p + q) > cx.bound);
}

#[test]
fn m1_fails_at_first_violation() {
    let mut logm: Vec<f64> = (0..=64).map(log_factorial).collect();
    logm[40] += 0.5;
    let m = LogSequence::new("bumped", Provenance::Explicit, logm).unwrap();
    let v = check_sequence_condition(&m, SeqCondition::M1).unwrap();
    assert_eq!(v.status, Status::Fails);
    assert_eq!(v.counterexample.unwrap().index, Some(41));
}

#[test]
fn exotic_sequences_admit_only_m1_and_normalized() {
    let mut v = vec![0.0; 16];
    for x in v.iter_mut().skip(2) {
        *x = f64::INFINITY;
    }
    let m = LogSequence::new("w", Provenance::Weight { lambda: Some(1.0) }, v).unwrap();
    assert_eq!(status(&m, SeqCondition::M1), Status::Holds);
    assert_eq!(status(&m, SeqCondition::Normalized), Status::Holds);
    assert!(check_sequence_condition(&m, SeqCondition::M2).is_err());
}
