//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails. Criteria that need a Horn solver use `ADTFREE_SOLVER` or z3.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};

use adtfree::algorithm::{run, Config, RunOutcome};
use adtfree::frontend::{parse_problem, parse_problem_file};
use adtfree::model::variant::{missing_variants, sets_variant_equal};
use adtfree::rules::DefKind;
use adtfree::solver::{check_f1, decide, decide_transformed, Decision, F1Result, SolverVerdict};

use common::props::*;
use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn golden_reverse() -> Outcome {
    let p = load("reverse.chc");
    let start = Instant::now();
    let t = match run(&p, &Config::default()).map_err(|e| e.to_string())? {
        RunOutcome::Transformed(t) => t,
        other => return Err(format!("{other:?}")),
    };
    let elapsed = start.elapsed();
    let golden = parse_problem(REVERSE_GOLDEN).unwrap();
    ensure(sets_variant_equal(&t.output.clauses, &golden.clauses), || {
        let miss: Vec<String> = missing_variants(&golden.clauses, &t.output.clauses).iter().map(|c| c.to_string()).collect();
        format!("output differs; missing {miss:?}")
    })?;
    ensure(t.iterations <= 5, || format!("{} iterations", t.iterations))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    let shapes: Vec<(DefKind, Vec<&str>)> = t
        .defs
        .iter()
        .map(|d| (d.kind, d.clause.body.iter().map(|a| &*a.pred).collect()))
        .collect();
    let expected = [
        (DefKind::Projection, vec!["append", "reverse", "len", "len", "len"]),
        (DefKind::Projection, vec!["reverse", "len", "len"]),
        (DefKind::Difference, vec!["snoc", "len", "len"]),
    ];
    ensure(shapes == expected, || format!("definitions {shapes:?}"))?;
    let in_ledger: Vec<_> = t.ledger.definitions().collect();
    ensure(t.defs.iter().all(|d| in_ledger.contains(&d.clause.id)), || "definitions missing from ledger".into())?;
    Ok(format!("{} clauses, {} iterations, {elapsed:.2?}", t.output.clauses.len(), t.iterations))
}

fn end_to_end() -> Outcome {
    let s = solver().ok_or("no Horn solver available (set ADTFREE_SOLVER)")?;
    let cfg = Config::default();
    let sat = decide(&load("reverse.chc"), &cfg, Some(&s));
    ensure(sat.decision == Decision::Sat, || format!("reverse: {}", sat.decision))?;
    let unsat = decide(&load("reverse_star.chc"), &cfg, Some(&s));
    ensure(unsat.decision == Decision::Unsat, || format!("reverse*: {}", unsat.decision))?;
    ensure(unsat.f1 == Some(F1Result::Holds), || format!("functionality: {:?}", unsat.f1))?;
    Ok("reverse sat; reverse* unsat with functional diff".into())
}

fn condition_u() -> Outcome {
    let t = self_fold_scenario();
    let v = t.ledger.u_audit().err().ok_or("audit passed")?;
    let r = decide_transformed(&t, &always(SolverVerdict::Unsat { cex: None }));
    ensure(matches!(r.decision, Decision::Unknown(_)), || format!("decided {}", r.decision))?;
    let rev = run(&load("reverse.chc"), &Config::default()).map_err(|e| e.to_string())?;
    let RunOutcome::Transformed(rev) = rev else { return Err("reverse did not terminate".into()) };
    ensure(rev.ledger.u_audit().is_ok(), || "algorithm run violates the audit".into())?;
    let v: Vec<String> = v.iter().map(ToString::to_string).collect();
    Ok(format!("audit rejects definition {}; {}", v.join(","), r.decision))
}

fn condition_e() -> Outcome {
    let t = instantiating_fold_scenario();
    let folded = t.output.clauses[0].id;
    ensure(t.ledger.is_marked(folded), || "folded clause not marked".into())?;
    let r = decide_transformed(&t, &always(SolverVerdict::Unsat { cex: None }));
    ensure(matches!(r.decision, Decision::Unknown(_)), || format!("decided {}", r.decision))?;
    Ok(format!("clause {folded} marked; {}", r.decision))
}

fn f1_failure() -> Outcome {
    let (_, _, t) = non_functional_diff_scenario();
    let real = solver();
    let mock = always(SolverVerdict::Unsat { cex: None });
    let (s, which): (&dyn adtfree::solver::HornSolver, &str) = match &real {
        Some(s) => (s, "solver"),
        None => (&mock, "mock unsat back end"),
    };
    let f1 = check_f1(&t.diff_preds(), &t.output, s);
    ensure(f1 == F1Result::Fails, || format!("check_f1 = {f1:?}"))?;
    let r = decide_transformed(&t, s);
    ensure(matches!(r.decision, Decision::Unknown(_)), || format!("decided {}", r.decision))?;
    Ok(format!("check_f1 fails ({which}); {}", r.decision))
}

fn constraint_properties() -> Outcome {
    const CASES: u32 = 1000;
    // no source file to persist failures next to
    let runner = || {
        TestRunner::new(PropConfig {
            failure_persistence: None,
            ..PropConfig::with_cases(CASES)
        })
    };
    fn fail<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
        format!("{name}: {e}")
    }
    runner()
        .run(&(rows(4), rows(4)), |(a, b)| widening_is_entailed_by_both_arguments(&a, &b))
        .map_err(|e| fail("widen", e))?;
    runner()
        .run(&(rows(4), prop::array::uniform3(any::<bool>())), |(a, k)| projection_holds_on_every_model(&a, k))
        .map_err(|e| fail("project", e))?;
    runner().run(&rows(4), |a| entailment_is_reflexive(&a)).map_err(|e| fail("reflexive", e))?;
    let flags = || prop::collection::vec(any::<bool>(), 4);
    runner()
        .run(&(rows(4), flags(), flags(), rows(2)), |(a, d1, d2, o)| entailment_is_transitive(&a, &d1, &d2, &o))
        .map_err(|e| fail("transitive", e))?;
    runner().run(&(rows(3), rows(2)), |(a, b)| entailment_is_sound(&a, &b)).map_err(|e| fail("sound", e))?;
    runner()
        .run(&rows(4), |a| satisfiability_matches_grid_enumeration(&a))
        .map_err(|e| fail("grid", e))?;
    Ok(format!("6 properties x {CASES} cases"))
}

fn corpus_invariants() -> Outcome {
    let files = corpus();
    ensure(files.len() == 20, || format!("{} problems", files.len()))?;
    let parsed: Vec<_> = files
        .iter()
        .map(|f| parse_problem_file(&std::fs::read_to_string(f).unwrap()).map_err(|e| format!("{}: {e}", f.display())))
        .collect::<Result<_, _>>()?;
    let invalid = parsed.iter().filter(|p| p.expect.as_deref() == Some("unsat")).count();
    ensure(invalid == 5, || format!("{invalid} invalid variants"))?;
    let outcomes: Vec<_> = std::thread::scope(|s| {
        let hs: Vec<_> = parsed.iter().map(|p| s.spawn(|| run(&p.problem, &Config::default()))).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut terminated = 0;
    for (f, o) in files.iter().zip(outcomes) {
        let name = f.file_name().unwrap().to_string_lossy();
        match o.map_err(|e| format!("{name}: {e}"))? {
            RunOutcome::Transformed(t) => {
                terminated += 1;
                ensure(t.output.clauses.iter().all(|c| c.has_basic_types()), || format!("{name}: ADTs remain"))?;
                ensure(t.levels.is_satisfiable(), || format!("{name}: level store unsat"))?;
                let ids: Vec<_> = t.output.clauses.iter().map(|c| c.id).collect();
                let cut = t.ledger.disconnected(ids);
                ensure(cut.is_empty(), || format!("{name}: disconnected {cut:?}"))?;
            }
            RunOutcome::LevelUnsat(_) => return Err(format!("{name}: level store unsat")),
            RunOutcome::IterationLimit { .. } => {}
        }
    }
    Ok(format!("{terminated}/20 terminate, all well-formed"))
}

fn ablation() -> Outcome {
    let cfg = Config {
        no_diff: true,
        ..Config::default()
    };
    let start = Instant::now();
    let r = decide(&load("reverse.chc"), &cfg, None);
    let expected = Decision::Unknown("transformation did not terminate".into());
    ensure(r.decision == expected, || format!("got {}", r.decision))?;
    ensure(r.iterations == cfg.max_iterations, || format!("{} iterations", r.iterations))?;
    Ok(format!("{} after {} iterations, {} definitions, {:.1?}", r.decision, r.iterations, r.defs, start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden reverse transformation", golden_reverse),
        ("end-to-end sat/unsat", end_to_end),
        ("condition U audit", condition_u),
        ("condition E marking", condition_e),
        ("F1 failure path", f1_failure),
        ("constraint engine properties", constraint_properties),
        ("corpus structural invariants", corpus_invariants),
        ("ablation without difference predicates", ablation),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
