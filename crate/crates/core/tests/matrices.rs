use proptest::prelude::*;
use ultragrowth_core::assocfn::{Case, WeightFn};
use ultragrowth_core::conjugate::matrix_of_weight;
use ultragrowth_core::matrices::{
    check_matrix_condition, condition_at, matrix_nqa, relate_matrices, MatrixCondition, MatrixRelation,
    WeightMatrix,
};
use ultragrowth_core::relations::{seq_relate, Relation};
use ultragrowth_core::{LogSequence, RunConfig, Status};

const P: usize = 1024;

fn cfg() -> RunConfig {
    RunConfig::default()
}

fn power_matrix(a: f64) -> WeightMatrix {
    let cfg = cfg();
    matrix_of_weight(&WeightFn::power(a).unwrap(), &cfg.lambdas, P, &cfg).unwrap()
}

fn constant_gevrey(s: f64) -> WeightMatrix {
    WeightMatrix::constant(format!("G^{s}"), &LogSequence::gevrey(s, P).unwrap(), &cfg().lambdas).unwrap()
}

/// `M^(λ)_p = λ^p (p!)^s`.
fn scaled_gevrey(s: f64, lambdas: &[f64], p: usize) -> WeightMatrix {
    let g = LogSequence::gevrey(s, p).unwrap();
    WeightMatrix::new(
        format!("scaled G^{s}"),
        lambdas.iter().map(|&l| (l, g.scaled(l.ln()).unwrap())).collect(),
    )
    .unwrap()
}

#[test]
fn square_weight_matrix_has_the_product_property_with_unit_constant() {
    let m = power_matrix(2.0);
    let v = check_matrix_condition(&m, MatrixCondition::C37LR, &cfg());
    assert_eq!(v.status, Status::Holds, "{v:?}");
    for l in m.lambdas() {
        assert_eq!(v.witness(&format!("kappa@{l}")), Some(l));
        let a = v.witness(&format!("A@{l}")).unwrap();
        assert!((a - 1.0).abs() <= 1e-6, "lambda = {l}: A = {a}");
    }
}

#[test]
fn square_weight_matrix_is_monotone_and_constant() {
    let m = power_matrix(2.0);
    assert_eq!(check_matrix_condition(&m, MatrixCondition::Monotone, &cfg()).status, Status::Holds);
    assert_eq!(check_matrix_condition(&m, MatrixCondition::Constant, &cfg()).status, Status::Holds);
    assert_eq!(check_matrix_condition(&m, MatrixCondition::StandardLogConvex, &cfg()).status, Status::Holds);
}

#[test]
fn generated_matrices_satisfy_both_shift_conditions() {
    for a in [1.0, 2.0] {
        let m = power_matrix(a);
        for c in [MatrixCondition::M2PrimeR, MatrixCondition::M2PrimeB] {
            let v = check_matrix_condition(&m, c, &cfg());
            assert_eq!(v.status, Status::Holds, "t^{a} {c}: {v:?}");
        }
    }
}

#[test]
fn constant_sequence_matrix_never_has_the_beurling_square_property() {
    let v = check_matrix_condition(&constant_gevrey(0.5), MatrixCondition::BeurlingSquare, &cfg());
    assert_eq!(v.status, Status::Fails, "{v:?}");
    assert!(v.counterexample.is_some());
}

#[test]
fn swapped_entries_break_monotonicity() {
    let g1 = LogSequence::gevrey(1.0, 64).unwrap();
    let g2 = LogSequence::gevrey(2.0, 64).unwrap();
    let m = WeightMatrix::new("swapped", vec![(1.0, g2), (2.0, g1)]).unwrap();
    let v = check_matrix_condition(&m, MatrixCondition::Monotone, &cfg());
    assert_eq!(v.status, Status::Fails);
    assert_eq!(v.counterexample.unwrap().index, Some(2));
}

#[test]
fn distinct_gevrey_entries_are_not_constant() {
    let m = WeightMatrix::new(
        "mixed",
        vec![(1.0, LogSequence::gevrey(1.0, P).unwrap()), (2.0, LogSequence::gevrey(2.0, P).unwrap())],
    )
    .unwrap();
    assert_eq!(check_matrix_condition(&m, MatrixCondition::Constant, &cfg()).status, Status::Fails);
}

#[test]
fn gaussian_condition_reports_constants_per_c() {
    let m = power_matrix(2.0);
    let v = check_matrix_condition(&m, MatrixCondition::C12L2B, &cfg());
    assert_eq!(v.status, Status::Holds, "{v:?}");
    for c in [1.0, 2.0, 4.0] {
        assert!(v.witness(&format!("B@1(C={c})")).unwrap() > 0.0);
    }
    assert_eq!(check_matrix_condition(&m, MatrixCondition::C12L2R, &cfg()).status, Status::Holds);
}

#[test]
fn relation_is_reflexive_with_unit_constant() {
    let m = power_matrix(2.0);
    let v = relate_matrices(&m, &m, MatrixRelation::Roumieu, &cfg()).unwrap();
    assert_eq!(v.status, Status::Holds);
    for l in m.lambdas() {
        assert_eq!(v.witness(&format!("kappa@{l}")), Some(l));
        assert_eq!(v.witness(&format!("C@{l}")), Some(1.0));
    }
}

#[test]
fn square_weight_matrix_is_equivalent_to_the_critical_sequence() {
    let w = power_matrix(2.0);
    let g = constant_gevrey(0.5);
    for rel in [MatrixRelation::Roumieu, MatrixRelation::Beurling] {
        for (a, b) in [(&w, &g), (&g, &w)] {
            let v = relate_matrices(a, b, rel, &cfg()).unwrap();
            assert_eq!(v.status, Status::Holds, "{} vs {} {rel:?}: {v:?}", a.name(), b.name());
            for l in a.lambdas() {
                if rel == MatrixRelation::Roumieu {
                    assert!(v.witness(&format!("C@{l}")).unwrap().is_finite());
                }
            }
        }
    }
}

#[test]
fn square_weight_matrix_is_strongly_below_the_linear_one() {
    let sq = power_matrix(2.0);
    let lin = power_matrix(1.0);
    // Per-pair oracle: the root ratio (W_sq/W_lin)^(1/p) decreases to 0.
    for (l, a) in sq.entries() {
        for (k, b) in lin.entries() {
            let r: Vec<f64> = (1..=P).map(|p| (a.logm()[p] - b.logm()[p]) / p as f64).collect();
            assert!(r[P - 1] < r[P / 2 - 1] && r[P / 2 - 1] < r[P / 4 - 1], "lambda = {l}, kappa = {k}");
        }
    }
    assert_eq!(relate_matrices(&sq, &lin, MatrixRelation::Strong, &cfg()).unwrap().status, Status::Holds);
    assert_eq!(relate_matrices(&lin, &sq, MatrixRelation::Strong, &cfg()).unwrap().status, Status::Fails);
}

#[test]
fn non_quasianalyticity_of_matrices() {
    let half = power_matrix(0.5);
    for case in [Case::Roumieu, Case::Beurling] {
        assert_eq!(matrix_nqa(&half, case).status, Status::Holds, "t^0.5 {case:?}");
        assert_eq!(matrix_nqa(&constant_gevrey(1.0), case).status, Status::Fails, "G^1 {case:?}");
        assert_eq!(matrix_nqa(&constant_gevrey(2.0), case).status, Status::Holds, "G^2 {case:?}");
    }
    // Harmonic and Basel partial sums behind the last two cases.
    let harmonic: Vec<f64> = [256usize, 512, 1024].iter().map(|&n| (1..=n).map(|p| 1.0 / p as f64).sum()).collect();
    assert!(harmonic[2] - harmonic[1] > 0.69 && harmonic[1] - harmonic[0] > 0.69);
    let basel: f64 = (1..=P).map(|p| 1.0 / (p * p) as f64).sum();
    assert!(basel < std::f64::consts::PI.powi(2) / 6.0);
}

#[test]
fn exotic_entries_count_as_convergent() {
    let cfg = cfg();
    let m = matrix_of_weight(&WeightFn::trunc_log(), &[1.0, 2.0], 64, &cfg).unwrap();
    assert_eq!(matrix_nqa(&m, Case::Beurling).status, Status::Holds);
}

#[test]
fn matrix_json_keys_parse_back() {
    let m = scaled_gevrey(1.0, &[0.5, 1.0, 2.0], 32);
    let json = serde_json::to_string(&m).unwrap();
    let back: WeightMatrix = serde_json::from_str(&json).unwrap();
    assert_eq!(back, m);
    assert!(serde_json::from_str::<WeightMatrix>(&json.replace("\"0.5\"", "\"half\"")).is_err());
}

#[test]
fn condition_names_round_trip() {
    for c in MatrixCondition::ALL {
        assert_eq!(c.to_string().parse::<MatrixCondition>().unwrap(), c);
    }
    assert!("c99".parse::<MatrixCondition>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_condition_persists_at_larger_kappa(s in 0.3f64..2.5, i in 0usize..4, j in 0usize..4) {
        let grid = [0.5, 1.0, 2.0, 4.0];
        let m = scaled_gevrey(s, &grid, 128);
        let cfg = cfg();
        let (l, k) = (grid[i.min(j)], grid[i.max(j)]);
        let at = condition_at(&m, MatrixCondition::C37LR, l, l, &cfg).unwrap();
        prop_assume!(at.status == Status::Holds);
        let later = condition_at(&m, MatrixCondition::C37LR, l, k, &cfg).unwrap();
        prop_assert_eq!(later.status, Status::Holds);
        let a = at.witness(&format!("A@{l}")).unwrap();
        let b = later.witness(&format!("A@{l}")).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-9));
    }

    #[test]
    fn roumieu_relation_composes(s1 in 0.3f64..1.0, d1 in 0.0f64..0.8, d2 in 0.0f64..0.8) {
        let grid = [0.5, 1.0, 2.0];
        let cfg = cfg();
        let a = scaled_gevrey(s1, &grid, 256);
        let b = scaled_gevrey(s1 + d1, &grid, 256);
        let c = scaled_gevrey(s1 + d1 + d2, &grid, 256);
        let ab = relate_matrices(&a, &b, MatrixRelation::Roumieu, &cfg).unwrap();
        let bc = relate_matrices(&b, &c, MatrixRelation::Roumieu, &cfg).unwrap();
        prop_assume!(ab.status == Status::Holds && bc.status == Status::Holds);
        for l in grid {
            let k1 = ab.witness(&format!("kappa@{l}")).unwrap();
            let k2 = bc.witness(&format!("kappa@{k1}")).unwrap();
            let c1 = ab.witness(&format!("C@{l}")).unwrap();
            let c2 = bc.witness(&format!("C@{k1}")).unwrap();
            let direct = seq_relate(a.entry(l).unwrap(), c.entry(k2).unwrap(), Relation::Preceq, cfg.tolerances.stability).unwrap();
            prop_assert_eq!(direct.verdict.status, Status::Holds);
            prop_assert!(direct.verdict.witness("C").unwrap() <= c1 * c2 * (1.0 + 1e-9));
        }
    }
}
