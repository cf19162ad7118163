use proptest::prelude::*;
use ultragrowth_core::assocfn::WeightFn;
use ultragrowth_core::conjugate::{conjugate_table, lemma_block, matrix_of_weight, young_conjugate};
use ultragrowth_core::matrices::WeightMatrix;
use ultragrowth_core::RunConfig;

#[test]
fn truncated_logarithm_conjugate_is_degenerate() {
    let cfg = RunConfig::default();
    let w = WeightFn::trunc_log();
    for s in [0.0, 0.5, 1.0] {
        assert_eq!(young_conjugate(&w, s, &cfg).unwrap(), 0.0, "s = {s}");
    }
    for s in [1.01, 2.0, 10.0] {
        assert_eq!(young_conjugate(&w, s, &cfg).unwrap(), f64::INFINITY, "s = {s}");
    }
    let m = matrix_of_weight(&w, &[1.0], 64, &cfg).unwrap();
    let row = m.entry(1.0).unwrap();
    assert_eq!(&row.logm()[..2], &[0.0, 0.0]);
    assert!(row.logm()[2..].iter().all(|x| *x == f64::INFINITY));
}

#[test]
fn normalized_weight_conjugate_vanishes_at_zero() {
    let cfg = RunConfig::default();
    for w in [WeightFn::power(2.0).unwrap(), WeightFn::shifted_log(), WeightFn::power(0.5).unwrap()] {
        assert_eq!(young_conjugate(&w.normalized(), 0.0, &cfg).unwrap(), 0.0);
    }
}

/// `sup_{y≥0} (s y − e^{2y})` on a dense uniform grid.
fn dense_square_conjugate(s: f64) -> f64 {
    let n = 2_000_000;
    let top = 14.0;
    (0..=n)
        .map(|i| {
            let y = top * i as f64 / n as f64;
            s * y - (2.0 * y).exp()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn square_weight_conjugate_agrees_with_a_dense_grid() {
    let cfg = RunConfig::default();
    let w = WeightFn::power(2.0).unwrap();
    for s in [3.0, 17.0, 250.0, 4096.0] {
        let v = young_conjugate(&w, s, &cfg).unwrap();
        let d = dense_square_conjugate(s);
        assert!(v >= d - 1e-9 * d.abs());
        assert!((v - d).abs() <= 1e-6 * d.abs().max(1.0), "s = {s}: {v} vs {d}");
    }
}

#[test]
fn square_weight_matrix_satisfies_the_structural_lemma() {
    let cfg = RunConfig::default();
    let report = lemma_block(&WeightFn::power(2.0).unwrap(), &cfg).unwrap();
    for (k, v) in &report.checks {
        assert!(v.is_holds(), "{k}: {v:?}");
    }
    assert_eq!(report.checks["scaling_h2"].witness("A"), Some(4.0));
    assert_eq!(report.checks["scaling_h4"].witness("A"), Some(16.0));
}

#[test]
fn matrix_round_trips_through_json() {
    let cfg = RunConfig::default();
    let m = matrix_of_weight(&WeightFn::trunc_log(), &[0.5, 1.0, 2.0, 16.0], 16, &cfg).unwrap();
    let text = serde_json::to_string(&m).unwrap();
    let back: WeightMatrix = serde_json::from_str(&text).unwrap();
    assert_eq!(back, m);
    assert!(text.find("\"0.5\"").unwrap() < text.find("\"16\"").unwrap());
}

#[test]
fn matrix_of_weight_rejects_an_empty_grid() {
    assert!(matrix_of_weight(&WeightFn::power(2.0).unwrap(), &[], 16, &RunConfig::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugate_tables_are_convex_with_increasing_slope_ratio(a in 0.3f64..3.0, step in 0.05f64..2.0) {
        let cfg = RunConfig::default();
        let s: Vec<f64> = (0..120).map(|i| i as f64 * step).collect();
        let w = WeightFn::power(a).unwrap().normalized();
        let t = conjugate_table(&w, &s, &cfg).unwrap();
        let v = t.check_shape(1e-9);
        prop_assert!(v.is_holds(), "{:?}", v);
    }
}
