//! The transformation rules, applied to a [`Transformer`] state that owns the
//! level store, the ledger and the introduced definitions.
//!
//! | rule | method |
//! |------|--------|
//! | R1 definition | [`Transformer::define`] |
//! | R2 unfolding | [`Transformer::unfold`] |
//! | R3 folding | [`Transformer::fold`] |
//! | R4 clause deletion | [`Transformer::delete`] |
//! | R5 functionality | [`Transformer::functionality`] |
//! | R6 totality | [`Transformer::totality`] |
//! | R7 differential replacement | [`Transformer::diff_replace`] |

mod diff;
mod fold;
pub mod ledger;
pub mod level;
pub(crate) mod matching;
mod replace;
mod unfold;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::constraint::{Constraint, DEFAULT_FM_CEILING};
use crate::model::{Atom, Clause, ClauseId, ClauseSet, ModeSignature, ModelError, Renaming, Sort, Var, VarGen};

pub use ledger::{Ledger, RuleKind, Step, Violation};
pub use level::{LevelConstraint, LevelRel, LevelStore};
pub use unfold::Unfolded;

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("predicate `{0}` already exists")]
    NotFresh(String),
    #[error("head variable {0} does not occur in the definition body")]
    HeadVar(String),
    #[error("head variable {0} of a definition is not basic-typed")]
    AdtHead(String),
    #[error("clause {0} has no body atom at position {1}")]
    NoSuchAtom(ClauseId, usize),
    #[error("body of clause {0} does not contain an instance of definition {1}")]
    NoMatch(ClauseId, ClauseId),
    #[error("constraint of clause {0} does not entail the constraint of {1}")]
    NotEntailed(ClauseId, ClauseId),
    #[error("level constraint would become unsatisfiable: {0}")]
    Level(String),
    #[error("`{0}` is not declared {1}")]
    NotDeclared(String, &'static str),
    #[error("variable {0} of the replacement occurs in the clause")]
    OutputClash(String),
    #[error("clause {0} is not a definition")]
    NotADefinition(ClauseId),
    #[error("atoms {1} and {2} of clause {0} are not a functional pair")]
    NotFunctionalPair(ClauseId, usize, usize),
    #[error("outputs of atom {1} of clause {0} occur elsewhere")]
    OutputsUsed(ClauseId, usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DefKind {
    Projection,
    Generalization,
    Difference,
}

#[derive(Debug, Clone)]
pub struct Definition {
    pub clause: Clause,
    pub kind: DefKind,
}

impl Definition {
    pub fn pred(&self) -> &str {
        self.clause.head_pred().expect("definitions have a head")
    }
}

/// Transformation state: the input program, its declarations (extended
/// with every introduced predicate) and the rule bookkeeping.
#[derive(Debug, Clone)]
pub struct Transformer {
    pub problem: ClauseSet,
    pub levels: LevelStore,
    pub ledger: Ledger,
    pub defs: Vec<Definition>,
    pub ceiling: usize,
    pub(crate) gen: VarGen,
    next_id: u32,
    basic_closed: HashSet<Arc<str>>,
    descending: HashSet<Arc<str>>,
    /// Input clauses renamed into a namespace no other clause uses, for
    /// unification tests whose result is thrown away.
    probes: HashMap<Arc<str>, Vec<Clause>>,
}

impl Transformer {
    pub fn new(problem: &ClauseSet) -> Result<Self, RuleError> {
        problem.validate()?;
        let mut levels = LevelStore::new();
        for c in problem.definite() {
            let h = c.head_pred().unwrap_or_default();
            for a in &c.body {
                levels.ge(h, &a.pred);
            }
        }
        let mut t = Transformer {
            problem: problem.clone(),
            levels,
            ledger: Ledger::new(problem.clauses.iter().map(|c| c.id)),
            defs: Vec::new(),
            ceiling: DEFAULT_FM_CEILING,
            gen: problem.var_gen(),
            next_id: problem.max_id() + 1,
            basic_closed: HashSet::new(),
            descending: HashSet::new(),
            probes: HashMap::new(),
        };
        for c in problem.definite() {
            let map: Renaming = c.vars().into_iter().map(|v| (v.clone(), Var::new(&format!("?{}", v.name), v.sort.clone()))).collect();
            let pred = c.head.as_ref().unwrap().pred.clone();
            t.probes.entry(pred).or_default().push(c.rename(&map));
        }
        t.basic_closed = t.compute_basic_closed();
        t.descending = t.compute_descending();
        Ok(t)
    }

    /// Definite clauses of the input program.
    pub fn ds(&self) -> impl Iterator<Item = &Clause> {
        self.problem.definite()
    }

    pub fn fresh_id(&mut self) -> ClauseId {
        let id = ClauseId(self.next_id);
        self.next_id += 1;
        id
    }

    pub fn var_gen(&mut self) -> &mut VarGen {
        &mut self.gen
    }

    pub fn mode(&self, pred: &str) -> Result<&ModeSignature, ModelError> {
        self.problem.mode(pred)
    }

    pub fn modes(&self) -> &IndexMap<Arc<str>, ModeSignature> {
        &self.problem.modes
    }

    pub fn definition(&self, id: ClauseId) -> Option<&Definition> {
        self.defs.iter().find(|d| d.clause.id == id)
    }

    pub fn is_new_pred(&self, p: &str) -> bool {
        self.defs.iter().any(|d| d.pred() == p)
    }

    /// Input predicates all of whose clauses (transitively) have basic types.
    pub fn is_basic_closed(&self, p: &str) -> bool {
        self.basic_closed.contains(p)
    }

    pub fn is_descending(&self, p: &str) -> bool {
        self.descending.contains(p)
    }

    /// The atom still has to be eliminated: it has ADT arguments or its
    /// predicate is an input predicate that is not basic-closed.
    pub fn needs_removal(&self, a: &Atom) -> bool {
        a.has_adts() || (!self.is_new_pred(&a.pred) && !self.is_basic_closed(&a.pred))
    }

    pub fn is_done(&self, c: &Clause) -> bool {
        !c.head.as_ref().is_some_and(|h| h.has_adts()) && !c.body.iter().any(|a| self.needs_removal(a))
    }

    fn compute_basic_closed(&self) -> HashSet<Arc<str>> {
        let mut closed: HashSet<Arc<str>> = self
            .problem
            .preds
            .iter()
            .filter(|(_, s)| s.iter().all(Sort::is_basic))
            .map(|(p, _)| p.clone())
            .collect();
        loop {
            let before = closed.len();
            let bad: Vec<Arc<str>> = closed
                .iter()
                .filter(|p| {
                    self.problem
                        .clauses_for(p)
                        .any(|c| !c.has_basic_types() || c.body.iter().any(|a| !closed.contains(&a.pred)))
                })
                .cloned()
                .collect();
            for p in bad {
                closed.remove(&p);
            }
            if closed.len() == before {
                return closed;
            }
        }
    }

    /// Transitive "depends on" relation of the input program.
    fn depends(&self) -> HashMap<Arc<str>, HashSet<Arc<str>>> {
        let mut dep: HashMap<Arc<str>, HashSet<Arc<str>>> = HashMap::new();
        for c in self.ds() {
            let h = c.head.as_ref().unwrap().pred.clone();
            dep.entry(h).or_default().extend(c.body.iter().map(|a| a.pred.clone()));
        }
        loop {
            let mut changed = false;
            let keys: Vec<Arc<str>> = dep.keys().cloned().collect();
            for p in keys {
                let direct: Vec<Arc<str>> = dep[&p].iter().cloned().collect();
                let mut add = Vec::new();
                for q in direct {
                    if let Some(qs) = dep.get(&q) {
                        add.extend(qs.iter().filter(|r| !dep[&p].contains(*r)).cloned());
                    }
                }
                if !add.is_empty() {
                    changed = true;
                    dep.get_mut(&p).unwrap().extend(add);
                }
            }
            if !changed {
                return dep;
            }
        }
    }

    fn compute_descending(&self) -> HashSet<Arc<str>> {
        let dep = self.depends();
        let mut out = HashSet::new();
        'preds: for p in self.problem.preds.keys() {
            let Ok(m) = self.mode(p) else { continue };
            for c in self.problem.clauses_for(p) {
                let h = c.head.as_ref().unwrap();
                let t: Vec<_> = m.input_args(h).cloned().collect();
                for a in &c.body {
                    let reaches = &a.pred == p || dep.get(&a.pred).is_some_and(|s| s.contains(p));
                    if !reaches {
                        continue;
                    }
                    let Ok(ma) = self.mode(&a.pred) else { continue 'preds };
                    let u: Vec<_> = ma.input_args(a).cloned().collect();
                    if !matching::precedes(&u, &t) {
                        continue 'preds;
                    }
                }
            }
            out.insert(p.clone());
        }
        out
    }

    fn fresh_pred(&self, kind: DefKind) -> String {
        let taken = |n: &str| self.problem.preds.contains_key(n);
        let prefix = match kind {
            DefKind::Projection => "new",
            DefKind::Generalization => "gen",
            DefKind::Difference if !taken("diff") => return "diff".into(),
            DefKind::Difference => "diff",
        };
        (1..).map(|i| format!("{prefix}{i}")).find(|n| !taken(n)).unwrap()
    }

    /// R1. Introduces `newp(head_vars) ← constraint, body` with `inputs` the
    /// input positions of the head. Heads are basic-typed, the only shape
    /// the removal loop needs. A fresh name is generated when `name`
    /// is `None`. The level of `newp` is the maximum level of the body.
    pub fn define(
        &mut self,
        kind: DefKind,
        name: Option<&str>,
        head_vars: Vec<Var>,
        inputs: Vec<usize>,
        constraint: Constraint,
        body: Vec<Atom>,
    ) -> Result<Definition, RuleError> {
        let name = match name {
            Some(n) if self.problem.preds.contains_key(n) => return Err(RuleError::NotFresh(n.into())),
            Some(n) => n.to_string(),
            None => self.fresh_pred(kind),
        };
        if let Some(v) = head_vars.iter().find(|v| !v.is_basic()) {
            return Err(RuleError::AdtHead(v.to_string()));
        }
        let body_vars: Vec<Var> = body.iter().flat_map(|a| a.vars()).collect();
        if let Some(v) = head_vars.iter().find(|v| !body_vars.contains(v)) {
            return Err(RuleError::HeadVar(v.to_string()));
        }
        for a in &body {
            if !self.problem.preds.contains_key(&a.pred) {
                return Err(ModelError::UndeclaredPredicate(a.pred.to_string()).into());
            }
        }
        let pred: Arc<str> = Arc::from(name.as_str());
        let outputs = (0..head_vars.len()).filter(|i| !inputs.contains(i)).collect();
        self.problem
            .preds
            .insert(pred.clone(), head_vars.iter().map(|v| v.sort.clone()).collect());
        self.problem.modes.insert(pred.clone(), ModeSignature::new(inputs, outputs));
        let body_preds: Vec<Arc<str>> = body.iter().map(|a| a.pred.clone()).collect();
        self.levels.max_of(&name, &body_preds);
        let head = Atom::new(&name, head_vars.into_iter().map(crate::model::Term::Var).collect());
        let id = self.fresh_id();
        let clause = Clause::new(id, Some(head), constraint, body);
        let mut step = Step::new(RuleKind::Define, vec![], vec![id]);
        step.detail = format!("{clause}");
        self.ledger.record(step);
        let def = Definition { clause, kind };
        self.defs.push(def.clone());
        Ok(def)
    }

    /// Clause set with the declarations of every predicate occurring in
    /// `clauses`.
    pub fn clause_set(&self, clauses: Vec<Clause>) -> ClauseSet {
        let mut used: Vec<Arc<str>> = Vec::new();
        for c in &clauses {
            for a in c.head.iter().chain(&c.body) {
                if !used.contains(&a.pred) {
                    used.push(a.pred.clone());
                }
            }
        }
        let adt_needed = clauses.iter().any(|c| !c.has_basic_types());
        ClauseSet {
            adts: if adt_needed { self.problem.adts.clone() } else { Vec::new() },
            preds: used
                .iter()
                .filter_map(|p| self.problem.preds.get(p).map(|s| (p.clone(), s.clone())))
                .collect(),
            modes: used
                .iter()
                .filter_map(|p| self.problem.modes.get(p).map(|m| (p.clone(), m.clone())))
                .collect(),
            clauses,
        }
    }
}
