use proptest::prelude::*;
use ultragrowth_core::assocfn::{omega_of_sequence, WeightFn};
use ultragrowth_core::conjugate::matrix_of_weight;
use ultragrowth_core::lambdanorms::{
    empirical_domination, lambda_norm, matrix_norm, CoefficientFamily, CoefficientFile, NormMode,
};
use ultragrowth_core::{RunConfig, Status};

fn cfg() -> RunConfig {
    RunConfig::default()
}

fn power(a: f64) -> WeightFn {
    WeightFn::power(a).unwrap()
}

#[test]
fn witness_cancels_at_j_one() {
    for w in [power(2.0), power(0.5), WeightFn::shifted_log()] {
        let c = CoefficientFamily::witness(w.clone(), 1_000_000);
        let n = lambda_norm(&c, &w, NormMode::Roumieu(1), &cfg());
        assert_eq!(n.log_value, 0.0, "{}", w.label());
        assert_eq!(n.value, 1.0);
    }
}

#[test]
fn kronecker_beurling_norm() {
    let w = power(1.5);
    for (i, j) in [(4u64, 1u32), (9, 2), (7, 3)] {
        let n = lambda_norm(&CoefficientFamily::Kronecker { i }, &w, NormMode::Beurling(j), &cfg());
        let expected = j as f64 * ((i as f64).sqrt() * j as f64).powf(1.5);
        assert!((n.log_value - expected).abs() <= 1e-12 * expected, "i = {i}, j = {j}");
        assert_eq!(n.small_o_square, Some(Status::Holds));
    }
    let sq = lambda_norm(&CoefficientFamily::Kronecker { i: 1 }, &power(2.0), NormMode::Beurling(1), &cfg());
    assert_eq!(sq.small_o_square, Some(Status::Fails));
}

#[test]
fn zero_coefficients_have_zero_norm() {
    let c = CoefficientFamily::explicit(vec![0.0; 16]).unwrap();
    let n = lambda_norm(&c, &power(2.0), NormMode::Roumieu(2), &cfg());
    assert_eq!(n.value, 0.0);
    assert_eq!(n.argmax, None);
}

#[test]
fn matrix_norms_of_witnesses_and_singletons() {
    let cfg = cfg();
    let m = matrix_of_weight(&power(2.0), &cfg.lambdas, 1024, &cfg).unwrap();
    for j in [1u32, 2, 4] {
        let entry = m.entry(j as f64).unwrap().clone();
        let c = CoefficientFamily::WeightWitness {
            weight: WeightFn::associated(entry),
            scale: 1.0 / j as f64,
            support: 100_000,
        };
        assert_eq!(matrix_norm(&c, &m, NormMode::Roumieu(j)).unwrap().value, 1.0, "j = {j}");
    }
    assert_eq!(matrix_norm(&CoefficientFamily::Kronecker { i: 0 }, &m, NormMode::Roumieu(2)).unwrap().value, 1.0);
    let mut values = vec![0.0; 5];
    values[4] = 1.0;
    let single = CoefficientFamily::explicit(values).unwrap();
    let got = matrix_norm(&single, &m, NormMode::Roumieu(1)).unwrap();
    // Direct evaluation: max over p of p log 2 - log W^(1)_p.
    let w1 = m.entry(1.0).unwrap();
    let direct = (0..=1024).map(|p| p as f64 * 2f64.ln() - w1.logm()[p]).fold(f64::NEG_INFINITY, f64::max);
    assert!((got.log_value - direct).abs() < 1e-12);
    assert!((got.log_value - omega_of_sequence(w1, 2.0).unwrap().value).abs() < 1e-12);
    assert!(matrix_norm(&single, &m, NormMode::Roumieu(3)).is_err());
}

#[test]
fn identical_weights_dominate_with_unit_constants() {
    let r = empirical_domination(&power(2.0), &power(2.0), &cfg());
    assert_eq!(r.verdict.status, Status::Holds);
    for (k, v) in [("l", 1.0), ("C", 1.0), ("a", 1.0), ("b", 0.0)] {
        assert_eq!(r.verdict.witness(k), Some(v), "{k}");
    }
}

#[test]
fn domination_follows_the_growth_order() {
    let fwd = empirical_domination(&power(2.0), &power(1.5), &cfg());
    assert_eq!(fwd.verdict.status, Status::Holds, "{fwd:?}");
    assert!(fwd.verdict.witness("a").unwrap() <= 1.1);
    assert!(fwd.verdict.witness("b").unwrap().is_finite());
    // Ratio oracle: t^1.5 / t^2 falls and t^2 / t^1.5 grows on the probe.
    let ts = cfg().t_grid();
    assert!(ts.windows(2).all(|w| w[1].powf(-0.5) < w[0].powf(-0.5)));
    let back = empirical_domination(&power(1.5), &power(2.0), &cfg());
    assert_eq!(back.verdict.status, Status::Fails, "{back:?}");
    assert_eq!(back.attempts.len(), 16);
}

#[test]
fn coefficient_files_parse() {
    let cfg = cfg();
    let f: CoefficientFile = serde_json::from_str(r#"{"kind":"weight_witness","weight":"t^2","support":100}"#).unwrap();
    assert_eq!(f.family(&cfg).unwrap().support(), 100);
    let f: CoefficientFile = serde_json::from_str(r#"{"kind":"kronecker","i":3}"#).unwrap();
    assert_eq!(serde_json::from_str::<CoefficientFile>(&serde_json::to_string(&f).unwrap()).unwrap(), f);
    let f: CoefficientFile = serde_json::from_str(r#"{"kind":"explicit"}"#).unwrap();
    assert!(f.family(&cfg).is_err());
    assert!(serde_json::from_str::<CoefficientFile>(r#"{"kind":"other"}"#).is_err());
    assert_eq!("beurling:3".parse::<NormMode>().unwrap(), NormMode::Beurling(3));
    assert!("roumieu:0".parse::<NormMode>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn roumieu_norm_does_not_grow_with_j(a in 0.3f64..2.5, values in prop::collection::vec(-5.0f64..5.0, 1..64)) {
        let c = CoefficientFamily::explicit(values).unwrap();
        let w = power(a).normalized();
        let mut last = f64::INFINITY;
        for j in 1..=6 {
            let n = lambda_norm(&c, &w, NormMode::Roumieu(j), &cfg()).log_value;
            prop_assert!(n <= last + 1e-12);
            last = n;
        }
    }

    #[test]
    fn norms_scale_linearly(r in 0.01f64..100.0, j in 1u32..5, values in prop::collection::vec(0.1f64..5.0, 1..64)) {
        let c = CoefficientFamily::explicit(values).unwrap();
        let w = power(1.5);
        for mode in [NormMode::Roumieu(j), NormMode::Beurling(j)] {
            let base = lambda_norm(&c, &w, mode, &cfg()).value;
            let scaled = lambda_norm(&c.scaled(r).unwrap(), &w, mode, &cfg()).value;
            prop_assert!((scaled - r * base).abs() <= 1e-9 * r * base);
        }
    }
}
