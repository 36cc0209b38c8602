use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use super::sort::{validate_adts, AdtDecl, CtorDecl};
use super::{Atom, Clause, ClauseId, ModeSignature, ModelError, Sort, Term, VarGen};

/// Clauses together with the declarations they are typed against.
#[derive(Debug, Clone, Default)]
pub struct ClauseSet {
    pub adts: Vec<AdtDecl>,
    pub preds: IndexMap<Arc<str>, Vec<Sort>>,
    pub modes: IndexMap<Arc<str>, ModeSignature>,
    pub clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn adt(&self, name: &str) -> Option<&AdtDecl> {
        self.adts.iter().find(|a| &*a.name == name)
    }

    pub fn ctor(&self, name: &str) -> Option<(&AdtDecl, &CtorDecl)> {
        self.adts.iter().find_map(|a| a.ctor(name).map(|c| (a, c)))
    }

    pub fn definite(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.is_goal())
    }

    pub fn goals(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| c.is_goal())
    }

    pub fn clauses_for<'a>(&'a self, pred: &'a str) -> impl Iterator<Item = &'a Clause> + 'a {
        self.clauses.iter().filter(move |c| c.head_pred() == Some(pred))
    }

    pub fn get(&self, id: ClauseId) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    pub fn max_id(&self) -> u32 {
        self.clauses.iter().map(|c| c.id.0).max().unwrap_or(0)
    }

    /// A generator whose names cannot clash with any variable in the set.
    pub fn var_gen(&self) -> VarGen {
        let mut g = VarGen::new();
        for c in &self.clauses {
            for v in c.vars() {
                g.observe(&v.name);
            }
        }
        g
    }

    pub fn mode(&self, pred: &str) -> Result<&ModeSignature, ModelError> {
        self.modes
            .get(pred)
            .ok_or_else(|| ModelError::MissingMode(pred.to_string()))
    }

    /// Checks declarations, typing and the atom discipline of every clause.
    pub fn validate(&self) -> Result<(), ModelError> {
        validate_adts(&self.adts)?;
        for sorts in self.preds.values() {
            for s in sorts {
                self.check_sort(s)?;
            }
        }
        for (p, m) in &self.modes {
            let arity = self
                .preds
                .get(p)
                .ok_or_else(|| ModelError::UndeclaredPredicate(p.to_string()))?
                .len();
            let mut seen = vec![false; arity];
            for &i in m.inputs.iter().chain(&m.outputs) {
                if i >= arity || seen[i] {
                    return Err(ModelError::BadMode(p.to_string()));
                }
                seen[i] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(ModelError::BadMode(p.to_string()));
            }
        }
        for c in &self.clauses {
            for a in c.head.iter().chain(&c.body) {
                self.check_atom(c.id, a)?;
            }
            for v in c.constraint.vars() {
                if !v.is_basic() {
                    return Err(ModelError::SortMismatch {
                        clause: c.id,
                        detail: format!("constraint mentions {} of sort {}", v, v.sort),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_sort(&self, s: &Sort) -> Result<(), ModelError> {
        match s {
            Sort::Adt(n) if self.adt(n).is_none() => Err(ModelError::UnknownSort(n.to_string())),
            _ => Ok(()),
        }
    }

    fn check_atom(&self, id: ClauseId, a: &Atom) -> Result<(), ModelError> {
        let sorts = self
            .preds
            .get(&a.pred)
            .ok_or_else(|| ModelError::UndeclaredPredicate(a.pred.to_string()))?;
        if sorts.len() != a.args.len() {
            return Err(ModelError::ArityMismatch {
                pred: a.pred.to_string(),
                expected: sorts.len(),
                found: a.args.len(),
            });
        }
        let mut seen = Vec::new();
        for (t, s) in a.args.iter().zip(sorts) {
            self.check_term(id, t, s)?;
            if s.is_basic() {
                match t {
                    Term::Var(v) if !seen.contains(v) => seen.push(v.clone()),
                    _ => {
                        return Err(ModelError::BasicDiscipline {
                            clause: id,
                            pred: a.pred.to_string(),
                        })
                    }
                }
            }
        }
        Ok(())
    }

    fn check_term(&self, id: ClauseId, t: &Term, expected: &Sort) -> Result<(), ModelError> {
        let mismatch = |found: &Sort| ModelError::SortMismatch {
            clause: id,
            detail: format!("`{t}` has sort {found}, expected {expected}"),
        };
        match t {
            Term::Var(v) if &v.sort != expected => Err(mismatch(&v.sort)),
            Term::Int(_) if expected != &Sort::Int => Err(mismatch(&Sort::Int)),
            Term::Bool(_) if expected != &Sort::Bool => Err(mismatch(&Sort::Bool)),
            Term::App { ctor, sort, args } => {
                let (adt, c) = self
                    .ctor(ctor)
                    .ok_or_else(|| ModelError::UnknownCtor(ctor.to_string()))?;
                let own = Sort::Adt(adt.name.clone());
                if &own != expected || sort != &own {
                    return Err(mismatch(&own));
                }
                if c.args.len() != args.len() {
                    return Err(ModelError::ArityMismatch {
                        pred: ctor.to_string(),
                        expected: c.args.len(),
                        found: args.len(),
                    });
                }
                for (a, s) in args.iter().zip(&c.args) {
                    self.check_term(id, a, s)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
