//! Back end: SMT-LIB emission, external Horn solvers and the decision
//! procedure that interprets their verdicts.
//!
//! Solver output protocol: the first line that is exactly `sat`, `unsat` or
//! `unknown` is the verdict. After `sat` the remaining text is kept as the
//! model. After `unsat`, every line consisting of a bare clause number is
//! read as a clause used in the refutation; if there is none, the
//! refutation is assumed to use every clause.

mod external;
mod smtlib;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algorithm::{run, Config, RunOutcome, Transformed};
use crate::constraint::{Constraint, LinExpr, Rel};
use crate::model::{Atom, Clause, ClauseId, ClauseSet, Term, Var};

pub use external::ExternalSolver;
pub use smtlib::{clause_ids, emit_smtlib, mangle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("cannot emit {0}: not basic-typed")]
    NotBasic(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverVerdict {
    Sat { model: String },
    /// `cex` lists the clauses used by the refutation, when reported.
    Unsat { cex: Option<Vec<ClauseId>> },
    Unknown,
    Timeout,
    Error(String),
}

impl fmt::Display for SolverVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverVerdict::Sat { .. } => write!(f, "sat"),
            SolverVerdict::Unsat { .. } => write!(f, "unsat"),
            SolverVerdict::Unknown => write!(f, "unknown"),
            SolverVerdict::Timeout => write!(f, "timeout"),
            SolverVerdict::Error(e) => write!(f, "error: {e}"),
        }
    }
}

/// Anything that decides satisfiability of a HORN script.
pub trait HornSolver: Sync {
    fn solve(&self, script: &str) -> SolverVerdict;
}

impl<F: Fn(&str) -> SolverVerdict + Sync> HornSolver for F {
    fn solve(&self, script: &str) -> SolverVerdict {
        self(script)
    }
}

pub fn parse_output(text: &str) -> SolverVerdict {
    let mut lines = text.lines().map(str::trim);
    for l in lines.by_ref() {
        match l {
            "sat" => {
                let model: Vec<&str> = lines.collect();
                return SolverVerdict::Sat { model: model.join("\n") };
            }
            "unsat" => {
                let ids: Vec<ClauseId> = lines.filter_map(|l| l.parse().ok()).map(ClauseId).collect();
                return SolverVerdict::Unsat {
                    cex: (!ids.is_empty()).then_some(ids),
                };
            }
            "unknown" => return SolverVerdict::Unknown,
            "timeout" => return SolverVerdict::Timeout,
            _ => {}
        }
    }
    let first = text.lines().next().unwrap_or("").trim();
    SolverVerdict::Error(format!("no verdict in solver output (first line: `{first}`)"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum F1Result {
    Holds,
    Fails,
    Unknown(String),
}

/// Clauses of `pn` defining `preds` and everything they call.
fn defining_clauses(preds: &[Arc<str>], pn: &ClauseSet) -> Vec<Clause> {
    let mut todo: Vec<Arc<str>> = preds.to_vec();
    let mut seen: BTreeSet<Arc<str>> = BTreeSet::new();
    let mut out = Vec::new();
    while let Some(p) = todo.pop() {
        if !seen.insert(p.clone()) {
            continue;
        }
        for c in pn.clauses_for(&p) {
            todo.extend(c.body.iter().map(|a| a.pred.clone()));
            out.push(c.clone());
        }
    }
    out.sort_by_key(|c| c.id);
    out
}

/// Goals `false ← O1ᵢ≠O2ᵢ, diff(I,O1), diff(I,O2)`, one per output
/// component, so the disjunction of disequalities stays Horn.
pub fn fun_diff_goals(pred: &str, pn: &ClauseSet, first_id: u32) -> Vec<Clause> {
    let Ok(mode) = pn.mode(pred) else { return Vec::new() };
    let Some(sorts) = pn.preds.get(pred) else { return Vec::new() };
    let mut a1 = Vec::new();
    let mut a2 = Vec::new();
    let mut pairs = Vec::new();
    for (i, s) in sorts.iter().enumerate() {
        if mode.inputs.contains(&i) {
            let v = Var::new(&format!("I{i}"), s.clone());
            a1.push(Term::Var(v.clone()));
            a2.push(Term::Var(v));
        } else {
            let (x, y) = (Var::new(&format!("O{i}a"), s.clone()), Var::new(&format!("O{i}b"), s.clone()));
            a1.push(Term::Var(x.clone()));
            a2.push(Term::Var(y.clone()));
            pairs.push((x, y));
        }
    }
    let body = vec![Atom::new(pred, a1), Atom::new(pred, a2)];
    pairs
        .into_iter()
        .enumerate()
        .map(|(k, (x, y))| {
            let mut c = Constraint::top();
            c.add(&LinExpr::var(&x), Rel::Ne, &LinExpr::var(&y));
            Clause::new(ClauseId(first_id + k as u32), None, c, body.clone())
        })
        .collect()
}

/// Checks that each predicate in `diffs` is functional from its inputs to
/// its outputs with respect to its defining clauses in `pn`.
pub fn check_f1(diffs: &[Arc<str>], pn: &ClauseSet, solver: &dyn HornSolver) -> F1Result {
    if diffs.is_empty() {
        return F1Result::Holds;
    }
    let mut clauses = defining_clauses(diffs, pn);
    let mut next = pn.max_id().max(clauses.iter().map(|c| c.id.0).max().unwrap_or(0)) + 1;
    for d in diffs {
        let goals = fun_diff_goals(d, pn, next);
        next += goals.len() as u32;
        clauses.extend(goals);
    }
    let cs = ClauseSet {
        adts: Vec::new(),
        preds: pn.preds.clone(),
        modes: pn.modes.clone(),
        clauses,
    };
    let script = match emit_smtlib(&cs) {
        Ok(s) => s,
        Err(e) => return F1Result::Unknown(e.to_string()),
    };
    match solver.solve(&script) {
        SolverVerdict::Sat { .. } => F1Result::Holds,
        SolverVerdict::Unsat { .. } => F1Result::Fails,
        v => F1Result::Unknown(format!("solver answered {v}")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Sat,
    Unsat,
    Unknown(String),
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Sat => write!(f, "sat"),
            Decision::Unsat => write!(f, "unsat"),
            Decision::Unknown(r) => write!(f, "unknown: {r}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecideReport {
    pub decision: Decision,
    pub transformed: Option<Box<Transformed>>,
    pub iterations: usize,
    /// Definitions introduced, including those of a run that hit the
    /// iteration bound.
    pub defs: usize,
    pub verdict: Option<SolverVerdict>,
    pub f1: Option<F1Result>,
}

impl DecideReport {
    fn unknown(reason: impl Into<String>, iterations: usize) -> Self {
        DecideReport {
            decision: Decision::Unknown(reason.into()),
            transformed: None,
            iterations,
            defs: 0,
            verdict: None,
            f1: None,
        }
    }
}

/// Transforms `p0` and decides the result with `solver`. Every failure
/// mode ends in `unknown` with a reason.
pub fn decide(p0: &ClauseSet, cfg: &Config, solver: Option<&dyn HornSolver>) -> DecideReport {
    let t = match run(p0, cfg) {
        Ok(RunOutcome::Transformed(t)) => t,
        Ok(RunOutcome::IterationLimit { iterations, defs }) => {
            let mut r = DecideReport::unknown("transformation did not terminate", iterations);
            r.defs = defs;
            return r;
        }
        Ok(RunOutcome::LevelUnsat(t)) => {
            let mut r = DecideReport::unknown("level constraints are unsatisfiable", t.iterations);
            r.defs = t.defs.len();
            r.transformed = Some(t);
            return r;
        }
        Err(e) => return DecideReport::unknown(format!("transformation failed: {e}"), 0),
    };
    let Some(solver) = solver else {
        let mut r = DecideReport::unknown("no solver configured", t.iterations);
        r.defs = t.defs.len();
        r.transformed = Some(t);
        return r;
    };
    let mut r = decide_transformed(&t, solver);
    r.transformed = Some(t);
    r
}

/// Decides the output of a transformation.
pub fn decide_transformed(t: &Transformed, solver: &dyn HornSolver) -> DecideReport {
    let mut report = DecideReport::unknown("", t.iterations);
    report.defs = t.defs.len();
    if let Err(ids) = t.ledger.u_audit() {
        let ids: Vec<String> = ids.iter().map(ToString::to_string).collect();
        report.decision = Decision::Unknown(format!("definitions folded without being unfolded: {}", ids.join(",")));
        return report;
    }
    let script = match emit_smtlib(&t.output) {
        Ok(s) => s,
        Err(e) => {
            report.decision = Decision::Unknown(e.to_string());
            return report;
        }
    };
    let verdict = solver.solve(&script);
    report.decision = match &verdict {
        SolverVerdict::Sat { .. } => Decision::Sat,
        SolverVerdict::Unsat { cex } => {
            let used: Vec<&Clause> = match cex {
                Some(ids) => t.output.clauses.iter().filter(|c| ids.contains(&c.id)).collect(),
                None => t.output.clauses.iter().collect(),
            };
            if used.iter().any(|c| t.ledger.is_marked(c.id)) {
                Decision::Unknown("the refutation uses a clause derived under a violated completeness condition".into())
            } else {
                let diffs: Vec<Arc<str>> = t
                    .diff_preds()
                    .into_iter()
                    .filter(|d| used.iter().any(|c| c.head.iter().chain(&c.body).any(|a| a.pred == *d)))
                    .collect();
                let f1 = check_f1(&diffs, &t.output, solver);
                let d = match &f1 {
                    F1Result::Holds => Decision::Unsat,
                    F1Result::Fails => Decision::Unknown("a difference predicate is not functional".into()),
                    F1Result::Unknown(why) => Decision::Unknown(format!("functionality check inconclusive: {why}")),
                };
                report.f1 = Some(f1);
                d
            }
        }
        SolverVerdict::Unknown => Decision::Unknown("solver returned unknown".into()),
        SolverVerdict::Timeout => Decision::Unknown("solver timed out".into()),
        SolverVerdict::Error(e) => Decision::Unknown(format!("solver error: {e}")),
    };
    report.verdict = Some(verdict);
    report
}
