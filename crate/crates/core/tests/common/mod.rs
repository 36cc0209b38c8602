//! Shared fixtures: problem loading, the external solver, and the small
//! hand-built scenarios that exercise the side conditions.

#![allow(dead_code)]

pub mod props;

use std::path::{Path, PathBuf};
use std::time::Duration;

use adtfree::algorithm::Transformed;
use adtfree::constraint::{Constraint, LinExpr, Rel};
use adtfree::frontend::parse_problem;
use adtfree::model::Subst;
use adtfree::rules::{DefKind, Ledger, Transformer};
use adtfree::solver::{ExternalSolver, SolverVerdict};
use adtfree::{Atom, Clause, ClauseId, ClauseSet, Sort, Term, Var};

pub fn problem_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

pub fn load(name: &str) -> ClauseSet {
    let p = problem_path(name);
    parse_problem(&std::fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn corpus() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(problem_path("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "chc"))
        .collect();
    v.sort();
    v
}

/// Solver command from `ADTFREE_SOLVER`, else z3 if it is on the path.
pub fn solver_command() -> Option<String> {
    if let Ok(cmd) = std::env::var("ADTFREE_SOLVER") {
        return Some(cmd);
    }
    let found = std::process::Command::new("sh")
        .args(["-c", "command -v z3"])
        .output()
        .is_ok_and(|o| o.status.success());
    found.then(|| "z3 fp.spacer.global=true {file}".to_string())
}

pub fn solver() -> Option<ExternalSolver> {
    solver_command().map(|c| ExternalSolver::new(c, Duration::from_secs(60)))
}

pub fn always(v: SolverVerdict) -> impl Fn(&str) -> SolverVerdict + Sync {
    move |_| v.clone()
}

/// The expected output on the reverse problem: the goal folded into
/// `new1`, and the definitions of `new1`, `new2` and `diff` in terms of
/// each other.
pub const REVERSE_GOLDEN: &str = "
:- pred new1(int, int, int).
:- pred new2(int, int).
:- pred diff(int, int, int).
:- mode new1(out, out, out).
:- mode new2(out, out).
:- mode diff(in, in, out).
false :- N2 =\\= N0 + N1, new1(N0, N1, N2).
new1(N0, N1, N2) :- N0 = 0, new2(N1, N2).
new1(N0, N1, N2) :- N0 = N + 1, new1(N, N1, M), diff(X, M, N2).
new2(M, N) :- M = 0, N = 0.
new2(M1, N1) :- M1 = M + 1, new2(M, N), diff(X, N, N1).
diff(X, N0, N1) :- N0 = 0, N1 = 1.
diff(X, N0, N1) :- N0 = N + 1, N1 = M + 1, diff(X, N, M).
";

pub fn int(n: &str) -> Term {
    Term::Var(Var::int(n))
}

pub fn list(n: &str) -> Term {
    Term::Var(Var::new(n, Sort::adt("list")))
}

pub fn nil() -> Term {
    Term::app("nil", Sort::adt("list"), vec![])
}

pub fn eq(x: &str, k: i64) -> Constraint {
    let mut c = Constraint::top();
    c.add(&LinExpr::var(&Var::int(x)), Rel::Eq, &LinExpr::constant(k));
    c
}

pub fn find(cs: &ClauseSet, id: u32) -> Clause {
    cs.clauses.iter().find(|c| c.id.0 == id).unwrap().clone()
}

/// `false :- p.  p.`, defining `newp :- p`, then folding the goal and the
/// definition itself with that definition, never unfolding it.
pub fn self_fold_scenario() -> Transformed {
    let p0 = parse_problem(
        ":- pred p.
         false :- p.
         p.",
    )
    .unwrap();
    let mut t = Transformer::new(&p0).unwrap();
    let d = t
        .define(DefKind::Projection, Some("newp"), vec![], vec![], Constraint::top(), vec![Atom::new("p", vec![])])
        .unwrap();
    let goal = find(&p0, 1);
    let fact = find(&p0, 2);
    let g = t.fold(&goal, d.clause.id, &[0], &Subst::default()).unwrap();
    let dd = t.fold(&d.clause, d.clause.id, &[0], &Subst::default()).unwrap();
    Transformed::from_state(t, vec![g, fact, dd], 1)
}

/// `false :- Y>0, a([],Y)` folded with `newp(Z) :- a(X,Z)` under
/// θ = {X/[], Z/Y}: the local variable X is instantiated, so the folded
/// clause loses completeness.
pub fn instantiating_fold_scenario() -> Transformed {
    let p0 = parse_problem(
        ":- adt list = nil | cons(int, list).
         :- pred a(list, int).
         :- mode a(in, out).
         :- total_functional a/2.
         false :- Y > 0, a([], Y).
         a([], Y) :- Y = 0.
         a([H|T], Y) :- Y = 1.",
    )
    .unwrap();
    let mut t = Transformer::new(&p0).unwrap();
    let d = t
        .define(
            DefKind::Projection,
            Some("newp"),
            vec![Var::int("Z")],
            vec![],
            Constraint::top(),
            vec![Atom::new("a", vec![list("X"), int("Z")])],
        )
        .unwrap();
    t.levels.eq("newp", "a");
    let unfolded: Vec<Clause> = t.unfold(&d.clause, 0).unwrap().into_iter().map(|u| u.clause).collect();
    let mut theta = Subst::default();
    theta.insert(Var::new("X", Sort::adt("list")), nil());
    theta.insert(Var::int("Z"), int("Y"));
    let folded = t.fold(&find(&p0, 1), d.clause.id, &[0], &theta).unwrap();
    let mut out = vec![folded];
    out.extend(unfolded);
    Transformed::from_state(t, out, 1)
}

/// A difference predicate `diff(W,Y) :- f(X,Y), r(X,W)` that is not
/// functional from W to Y, after the replacement of `f(X,Y)` in the goal
/// and the removal of the lists from every clause.
pub fn non_functional_diff_scenario() -> (Transformer, Clause, Transformed) {
    let p0 = parse_problem(
        ":- adt list = nil | cons(int, list).
         :- pred a(list).
         :- pred f(list, int).
         :- pred r(list, int).
         :- mode a(in).
         :- mode f(in, out).
         :- mode r(in, out).
         :- total_functional f/2, r/2.
         false :- Y > 0, a(X), f(X, Y).
         a([]).
         f([], Y) :- Y = 0.
         f([H|T], Y) :- Y = 1.
         r(X, W) :- W = 1.",
    )
    .unwrap();
    let mut t = Transformer::new(&p0).unwrap();
    let f = Atom::new("f", vec![list("X"), int("Y")]);
    let r = Atom::new("r", vec![list("X"), int("W")]);
    let d = t
        .define(
            DefKind::Difference,
            Some("diff"),
            vec![Var::int("W"), Var::int("Y")],
            vec![0],
            Constraint::top(),
            vec![f.clone(), r.clone()],
        )
        .unwrap();
    let replaced = t.diff_replace(&find(&p0, 1), &[1], &[r], d.clause.id, &Subst::default()).unwrap();

    // Basic-typed completion: `a(X), r(X,W)` becomes `new(W)`, and the
    // definition of diff is evaluated over both shapes of X.
    let basic = parse_problem(
        ":- pred new(int).
         :- pred diff(int, int).
         :- mode new(out).
         :- mode diff(in, out).
         false :- Y > 0, new(W), diff(W, Y).
         new(W) :- W = 1.
         diff(W, Y) :- Y = 0, W = 1.
         diff(W, Y) :- Y = 1, W = 1.",
    )
    .unwrap();
    let out = Transformed {
        output: basic,
        ledger: Ledger::new((1..=4).map(ClauseId)),
        levels: t.levels.clone(),
        defs: t.defs.clone(),
        iterations: 1,
    };
    (t, replaced, out)
}
