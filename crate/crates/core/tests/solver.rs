mod common;

use common::{arb_pair_table, arb_table, gradient_check_worst, ialpha_closed_form, interior_channel, table_from};
use pidkit::axioms::random_joint;
use pidkit::common_rv::iwedge;
use pidkit::corpus::{build, CaseName};
use pidkit::ialpha::{
    constraint_residuals, extend_with_q, ialpha, ialpha_oracle, ChannelObjective, SolverConfig,
    StartKind,
};
use pidkit::measures::imin;
use pidkit::prob::{mutual_information, VarSet};
use pidkit::JointTable;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn analytic_gradients_match_finite_differences() {
    let worst = gradient_check_worst(50, 11);
    assert!(worst <= 1e-5, "worst relative error {worst:e}");
}

#[test]
fn residuals_agree_with_table_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in 0..20 {
        let table = random_joint(&[2, 3, 3], s).unwrap();
        let preds = table.default_predictors();
        let obj = ChannelObjective::new(&table, &preds).unwrap();
        let w = interior_channel(3, 2, &mut rng);
        let channel =
            pidkit::prob::Channel::new(w.chunks(2).map(<[f64]>::to_vec).collect()).unwrap();
        let ext = extend_with_q(&table, &channel).unwrap();
        let q = table.num_variables();
        let via_table = constraint_residuals(&ext, q, &preds).unwrap();
        for (a, b) in obj.residuals(&w).iter().zip(&via_table) {
            assert!((a - b).abs() < 1e-12);
        }
        let info = mutual_information(&ext, &VarSet::single(q), &table.target_set()).unwrap();
        assert!((obj.information(&w) - info).abs() < 1e-12);
    }
}

fn solve(table: &JointTable) -> f64 {
    ialpha(table, &table.default_predictors(), &SolverConfig::default())
        .unwrap()
        .value
}

#[test]
fn solver_matches_grid_oracle_on_corpus() {
    // Subtle: the grid cannot beat zero either
    let t = build(CaseName::Subtle).table;
    let preds = t.default_predictors();
    let oracle = ialpha_oracle(&t, &preds, 8, 2, 1e-9).unwrap();
    assert!(oracle.abs() < 1e-12);
    assert!(solve(&t).abs() < 1e-3);

    // RdnXor at two Q states: the lattice contains the r/R split
    let t = build(CaseName::RdnXor).table;
    let preds = t.default_predictors();
    let oracle = ialpha_oracle(&t, &preds, 4, 2, 1e-9).unwrap();
    assert!((oracle - 1.0).abs() < 1e-12);
    let cfg = SolverConfig {
        q_arity: Some(2),
        ..SolverConfig::default()
    };
    let v = ialpha(&t, &preds, &cfg).unwrap().value;
    assert!((v - oracle).abs() < 1e-2, "{v}");

    let t = build(CaseName::And).table;
    let preds = t.default_predictors();
    let oracle = ialpha_oracle(&t, &preds, 8, 3, 1e-9).unwrap();
    assert!(oracle.abs() < 1e-12);
    assert!(solve(&t).abs() < 1e-3);
}

#[test]
fn oracle_rejects_large_grids() {
    let t = build(CaseName::RdnXor).table;
    let preds = t.default_predictors();
    assert!(ialpha_oracle(&t, &preds, 64, 3, 1e-9).is_err());
    assert!(ialpha_oracle(&t, &preds, 2, 2, 1e-9).is_err());
}

#[test]
fn solver_is_not_beaten_by_the_grid_on_sparse_tables() {
    // tables whose target classes split, so the optimum is positive
    let cases = [
        // X1 = X2 = Y
        (vec![2, 2, 2], vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]),
        // Y in {0,1,2}; X1 separates {0} from {1,2}, X2 separates {0,1} from {2}
        (
            vec![2, 2, 3],
            vec![0.3, 0.0, 0.0, 0.0, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5],
        ),
    ];
    for (shape, mass) in cases {
        let t = table_from(&shape, mass);
        let preds = t.default_predictors();
        let oracle = ialpha_oracle(&t, &preds, 8, 2, 1e-9).unwrap();
        let v = solve(&t);
        assert!(v >= oracle - 1e-4, "{v} < {oracle}");
        assert!((v - ialpha_closed_form(&t, &preds)).abs() < 1e-4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_agrees_with_closed_form(t in arb_table(2, 3, true)) {
        let preds = t.default_predictors();
        prop_assume!(preds.len() >= 2);
        let expect = ialpha_closed_form(&t, &preds);
        let got = solve(&t);
        prop_assert!((got - expect).abs() < 1e-4, "solver {} closed form {}", got, expect);
    }

    #[test]
    fn ialpha_sits_below_imin(t in arb_pair_table(3, true)) {
        let preds = t.default_predictors();
        let v = solve(&t);
        prop_assert!(v >= 0.0);
        prop_assert!(v <= imin(&t, &preds).unwrap() + 1e-4);
    }
}

#[test]
fn closed_form_oracle_on_corpus() {
    let expect = [
        (CaseName::Unq, 0.0),
        (CaseName::RdnXor, 1.0),
        (CaseName::And, 0.0),
        (CaseName::ImperfectRdn, 0.0),
        (CaseName::Subtle, 0.0),
    ];
    for (case, v) in expect {
        let t = build(case).table;
        assert!((ialpha_closed_form(&t, &t.default_predictors()) - v).abs() < 1e-12, "{case}");
    }
}

#[test]
fn common_information_can_exceed_ialpha_when_not_a_function_of_the_target() {
    // X1 = X2 = X, Y a noisy copy of X: the predictors share X, but no
    // channel from Y alone is screened off by X, so the ordering
    // I_∧ ≤ I_α breaks for this family
    let e = 0.1;
    let t = table_from(
        &[2, 2, 2],
        vec![0.5 * (1.0 - e), 0.5 * e, 0.0, 0.0, 0.0, 0.0, 0.5 * e, 0.5 * (1.0 - e)],
    );
    let preds = t.default_predictors();
    let w = iwedge(&t, &preds).unwrap();
    let a = solve(&t);
    let h = -(e * e.log2() + (1.0 - e) * (1.0 - e).log2());
    assert!((w - (1.0 - h)).abs() < 1e-12);
    assert!(a.abs() < 1e-6);
    assert!(w > a + 0.5);
}

#[test]
fn seeded_runs_are_reproducible_across_thread_counts() {
    let t = random_joint(&[2, 2, 3], 99).unwrap();
    let preds = t.default_predictors();
    let cfg = SolverConfig::default().with_seed(3);
    let a = ialpha(&t, &preds, &cfg).unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = single.install(|| ialpha(&t, &preds, &cfg).unwrap());
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.witness, b.witness);
    assert_eq!(a.diagnostics(), b.diagnostics());
}

#[test]
fn diagnostics_cover_every_start() {
    let t = build(CaseName::RdnXor).table;
    let cfg = SolverConfig::default().with_restarts(5);
    let r = ialpha(&t, &t.default_predictors(), &cfg).unwrap();
    assert_eq!(r.restarts.len(), 7);
    assert_eq!(r.restarts[0].start, StartKind::Meet);
    assert_eq!(r.restarts[1].start, StartKind::Constant);
    assert!(r.restarts[2..].iter().all(|s| s.start == StartKind::Random));
    assert!(r.feasible);
    assert!(r.max_residual() <= cfg.feasibility_tolerance);
    assert_eq!(r.q_arity, 5);
    // two classes are enough
    assert!(r.used_q_states >= 2);
    let d = r.diagnostics();
    assert_eq!(d["restarts"].as_array().unwrap().len(), 7);
}

#[test]
fn larger_q_arity_does_not_change_corpus_values() {
    for case in CaseName::ALL {
        let t = build(case).table;
        let preds = t.default_predictors();
        let base = solve(&t);
        let mut cfg = SolverConfig::default().with_restarts(8);
        cfg.q_arity = Some(t.target_variable().cardinality() + 3);
        let wide = ialpha(&t, &preds, &cfg).unwrap().value;
        assert!((base - wide).abs() < 1e-3, "{case}: {base} vs {wide}");
    }
}
