//! The reverse problem and the scenarios in which a side condition of the
//! transformation is violated.

mod common;

use std::time::Instant;

use adtfree::algorithm::{run, Config, RunOutcome};
use adtfree::frontend::parse_problem;
use adtfree::model::variant::{missing_variants, sets_variant_equal};
use adtfree::rules::{DefKind, RuleKind};
use adtfree::solver::{check_f1, decide, decide_transformed, Decision, F1Result, SolverVerdict};

use common::*;

fn transformed(name: &str, cfg: &Config) -> Box<adtfree::algorithm::Transformed> {
    match run(&load(name), cfg).unwrap() {
        RunOutcome::Transformed(t) => t,
        other => panic!("{name}: {other:?}"),
    }
}

#[test]
fn reverse_matches_the_golden_output() {
    let start = Instant::now();
    let t = transformed("reverse.chc", &Config::default());
    let elapsed = start.elapsed();
    let golden = parse_problem(REVERSE_GOLDEN).unwrap();
    assert!(
        sets_variant_equal(&t.output.clauses, &golden.clauses),
        "missing: {:?}\nunexpected: {:?}",
        missing_variants(&golden.clauses, &t.output.clauses),
        missing_variants(&t.output.clauses, &golden.clauses),
    );
    assert!(t.iterations <= 5, "{} iterations", t.iterations);
    assert!(elapsed.as_secs_f64() < 1.0, "{elapsed:?}");
}

#[test]
fn reverse_introduces_two_projections_and_one_difference() {
    let t = transformed("reverse.chc", &Config::default());
    let kinds: Vec<DefKind> = t.defs.iter().map(|d| d.kind).collect();
    assert_eq!(kinds, [DefKind::Projection, DefKind::Projection, DefKind::Difference]);
    let bodies: Vec<Vec<&str>> = t
        .defs
        .iter()
        .map(|d| d.clause.body.iter().map(|a| &*a.pred).collect())
        .collect();
    assert_eq!(bodies[0], ["append", "reverse", "len", "len", "len"]);
    assert_eq!(bodies[1], ["reverse", "len", "len"]);
    assert_eq!(bodies[2], ["snoc", "len", "len"]);
    let defined: Vec<_> = t.ledger.definitions().collect();
    assert_eq!(defined, t.defs.iter().map(|d| d.clause.id).collect::<Vec<_>>());
    assert!(t.ledger.u_audit().is_ok());
    assert!(t.levels.is_satisfiable());
    assert!(t.marked_outputs().is_empty());
}

#[test]
fn without_difference_predicates_reverse_does_not_terminate() {
    let cfg = Config {
        no_diff: true,
        max_iterations: 20,
        ..Config::default()
    };
    let r = decide(&load("reverse.chc"), &cfg, None);
    assert_eq!(r.decision, Decision::Unknown("transformation did not terminate".into()));
    assert_eq!(r.iterations, 20);
}

#[test]
fn folding_an_unfolded_definition_fails_the_audit() {
    let t = self_fold_scenario();
    let def = t.defs[0].clause.id;
    assert_eq!(t.ledger.u_audit(), Err(vec![def]));
    let folds = t.ledger.steps().iter().filter(|s| s.rule == RuleKind::Fold).count();
    assert_eq!(folds, 2);
    // even a solver claiming unsat cannot turn this into a verdict
    let r = decide_transformed(&t, &always(SolverVerdict::Unsat { cex: None }));
    assert!(matches!(r.decision, Decision::Unknown(_)), "{}", r.decision);
    assert!(r.verdict.is_none());
}

#[test]
fn instantiating_fold_marks_the_clause() {
    let t = instantiating_fold_scenario();
    let folded = &t.output.clauses[0];
    assert!(folded.body.iter().all(|a| &*a.pred == "newp"));
    assert!(t.ledger.is_marked(folded.id));
    assert!(t.ledger.u_audit().is_ok());
    let r = decide_transformed(&t, &always(SolverVerdict::Unsat { cex: None }));
    assert!(matches!(r.decision, Decision::Unknown(_)), "{}", r.decision);
    // a refutation that avoids the marked clause would be trusted
    let other: Vec<_> = t.output.clauses[1..].iter().map(|c| c.id).collect();
    let r = decide_transformed(&t, &always(SolverVerdict::Unsat { cex: Some(other) }));
    assert_eq!(r.decision, Decision::Unsat);
}

#[test]
fn instantiating_fold_with_a_real_solver() {
    let Some(s) = solver() else { return };
    let t = instantiating_fold_scenario();
    // the folded set is unsatisfiable although the input is not
    let r = decide_transformed(&t, &s);
    assert_eq!(r.verdict, Some(SolverVerdict::Unsat { cex: None }));
    assert!(matches!(r.decision, Decision::Unknown(_)));
}

#[test]
fn replacement_introduces_the_difference_atom() {
    let (_, replaced, _) = non_functional_diff_scenario();
    let preds: Vec<&str> = replaced.body.iter().map(|a| &*a.pred).collect();
    assert_eq!(preds, ["a", "r", "diff"]);
}

#[test]
fn non_functional_difference_predicate_fails_f1() {
    let (_, _, t) = non_functional_diff_scenario();
    assert_eq!(t.diff_preds().len(), 1);
    let unsat = always(SolverVerdict::Unsat { cex: None });
    assert_eq!(check_f1(&t.diff_preds(), &t.output, &unsat), F1Result::Fails);
    let r = decide_transformed(&t, &unsat);
    assert_eq!(r.f1, Some(F1Result::Fails));
    assert!(matches!(r.decision, Decision::Unknown(_)));
}

#[test]
fn non_functional_difference_predicate_with_a_real_solver() {
    let Some(s) = solver() else { return };
    let (_, _, t) = non_functional_diff_scenario();
    assert_eq!(check_f1(&t.diff_preds(), &t.output, &s), F1Result::Fails);
    let r = decide_transformed(&t, &s);
    assert!(matches!(r.verdict, Some(SolverVerdict::Unsat { .. })));
    assert!(matches!(r.decision, Decision::Unknown(_)), "{}", r.decision);
}

#[test]
fn reverse_end_to_end() {
    let Some(s) = solver() else { return };
    let cfg = Config::default();
    assert_eq!(decide(&load("reverse.chc"), &cfg, Some(&s)).decision, Decision::Sat);
    let r = decide(&load("reverse_star.chc"), &cfg, Some(&s));
    assert_eq!(r.decision, Decision::Unsat);
    assert_eq!(r.f1, Some(F1Result::Holds));
}
