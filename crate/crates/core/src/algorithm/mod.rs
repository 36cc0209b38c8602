//! The ADT-removal loop: repeatedly define-and-fold the clauses that still
//! carry ADTs, unfold the definitions introduced for them, and simplify.

mod ddf;
mod replace;
mod unfold;

use std::sync::Arc;

use indexmap::IndexSet;
use thiserror::Error;

use crate::constraint::DEFAULT_FM_CEILING;
use crate::model::{Clause, ClauseSet, ModelError};
use crate::rules::{DefKind, Definition, Ledger, LevelStore, RuleError, Transformer};

pub use ddf::diff_define_fold;
pub use replace::replace;
pub use unfold::unfold_definitions;

#[derive(Debug, Clone)]
pub struct Config {
    /// Loop turns before giving up.
    pub max_iterations: usize,
    /// Per-elimination row cap for Fourier–Motzkin.
    pub fm_ceiling: usize,
    /// Disable the introduction of difference predicates.
    pub no_diff: bool,
    /// Unfolding steps allowed per call of the unfolding procedure.
    pub unfold_budget: usize,
    /// Partial matches examined per definition when looking for a
    /// difference predicate.
    pub match_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_iterations: 100,
            fm_ceiling: DEFAULT_FM_CEILING,
            no_diff: false,
            unfold_budget: 20_000,
            match_limit: 4_096,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Result of a terminating run.
#[derive(Debug, Clone)]
pub struct Transformed {
    /// Basic-typed clauses, with the declarations of their predicates.
    pub output: ClauseSet,
    pub ledger: Ledger,
    pub levels: LevelStore,
    pub defs: Vec<Definition>,
    pub iterations: usize,
}

impl Transformed {
    pub fn from_state(t: Transformer, clauses: Vec<Clause>, iterations: usize) -> Self {
        Transformed {
            output: t.clause_set(clauses),
            ledger: t.ledger,
            levels: t.levels,
            defs: t.defs,
            iterations,
        }
    }

    /// Difference predicates introduced during the run.
    pub fn diff_preds(&self) -> Vec<Arc<str>> {
        let mut out: IndexSet<Arc<str>> = IndexSet::new();
        for d in self.defs.iter().filter(|d| d.kind == DefKind::Difference) {
            out.insert(Arc::from(d.pred()));
        }
        out.into_iter().collect()
    }

    pub fn marked_outputs(&self) -> Vec<&Clause> {
        self.output.clauses.iter().filter(|c| self.ledger.is_marked(c.id)).collect()
    }
}

#[derive(Debug, Clone)]
pub enum RunOutcome {
    Transformed(Box<Transformed>),
    /// The loop did not empty its work set within the configured bound.
    IterationLimit { iterations: usize, defs: usize },
    /// The collected level constraints have no solution.
    LevelUnsat(Box<Transformed>),
}

/// Runs the transformation on `p0`.
pub fn run(p0: &ClauseSet, cfg: &Config) -> Result<RunOutcome, RunError> {
    let mut t = Transformer::new(p0)?;
    t.ceiling = cfg.fm_ceiling;
    let mut in_cls: Vec<Clause> = p0.goals().cloned().collect();
    let mut transf: Vec<Clause> = Vec::new();
    let mut iterations = 0;
    while !in_cls.is_empty() {
        if iterations == cfg.max_iterations {
            return Ok(RunOutcome::IterationLimit {
                iterations,
                defs: t.defs.len(),
            });
        }
        iterations += 1;
        let (new_defs, folded) = diff_define_fold(&mut t, in_cls, cfg)?;
        let unfolded = unfold_definitions(&mut t, &new_defs, cfg)?;
        in_cls = replace(&mut t, unfolded);
        transf.extend(folded);
    }
    transf.extend(basic_support(&t, &transf));
    let level_ok = t.levels.is_satisfiable();
    let out = Box::new(Transformed::from_state(t, transf, iterations));
    Ok(if level_ok {
        RunOutcome::Transformed(out)
    } else {
        RunOutcome::LevelUnsat(out)
    })
}

/// Input clauses of basic-closed predicates reachable from `clauses`.
fn basic_support(t: &Transformer, clauses: &[Clause]) -> Vec<Clause> {
    let mut preds: IndexSet<Arc<str>> = IndexSet::new();
    let mut queue: Vec<Arc<str>> = clauses
        .iter()
        .flat_map(|c| c.body.iter().map(|a| a.pred.clone()))
        .filter(|p| t.is_basic_closed(p) && !t.is_new_pred(p))
        .collect();
    while let Some(p) = queue.pop() {
        if !preds.insert(p.clone()) {
            continue;
        }
        for c in t.problem.clauses_for(&p) {
            queue.extend(c.body.iter().map(|a| a.pred.clone()));
        }
    }
    t.ds()
        .filter(|c| c.head_pred().is_some_and(|p| preds.contains(p)))
        .cloned()
        .collect()
}
