//! Typed terms, atoms, clauses and the structural queries used by the
//! transformation.

mod clause;
mod clause_set;
pub mod query;
mod sort;
mod term;
pub mod variant;

pub use clause::{Atom, Clause, ClauseId, ModeSignature};
pub use clause_set::ClauseSet;
pub use sort::{validate_adts, AdtDecl, CtorDecl, Sort};
pub use term::{match_term, resolve, unify_all, unify_terms, Renaming, Subst, Term, Var, VarGen};
pub(crate) use term::VarSet;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("ADT `{0}` declared twice")]
    DuplicateAdt(String),
    #[error("constructor `{0}` declared twice")]
    DuplicateCtor(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("ADT `{0}` has no finite values")]
    NotWellFounded(String),
    #[error("undeclared predicate `{0}`")]
    UndeclaredPredicate(String),
    #[error("`{pred}` expects {expected} arguments, found {found}")]
    ArityMismatch { pred: String, expected: usize, found: usize },
    #[error("clause {clause}: {detail}")]
    SortMismatch { clause: ClauseId, detail: String },
    #[error("clause {clause}: basic argument of `{pred}` is not a distinct variable")]
    BasicDiscipline { clause: ClauseId, pred: String },
    #[error("unknown constructor `{0}`")]
    UnknownCtor(String),
    #[error("no mode declared for `{0}`")]
    MissingMode(String),
    #[error("mode of `{0}` is not a partition of its argument positions")]
    BadMode(String),
}

/// Most general unifier of two atoms; `None` for different predicates.
pub fn unify(a: &Atom, b: &Atom) -> Option<Subst> {
    if a.pred != b.pred {
        return None;
    }
    unify_all(&a.args, &b.args)
}
