use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use indexmap::{IndexMap, IndexSet};
use rustc_hash::FxBuildHasher;

use super::Sort;

/// A typed variable. Two variables are the same iff name and sort agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Arc<str>,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: &str, sort: Sort) -> Self {
        Var {
            name: Arc::from(name),
            sort,
        }
    }

    pub fn int(name: &str) -> Self {
        Var::new(name, Sort::Int)
    }

    pub fn is_basic(&self) -> bool {
        self.sort.is_basic()
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Int(i64),
    Bool(bool),
    App {
        ctor: Arc<str>,
        sort: Sort,
        args: Vec<Term>,
    },
}

impl Term {
    pub fn app(ctor: &str, sort: Sort, args: Vec<Term>) -> Self {
        Term::App {
            ctor: Arc::from(ctor),
            sort,
            args,
        }
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort.clone(),
            Term::Int(_) => Sort::Int,
            Term::Bool(_) => Sort::Bool,
            Term::App { sort, .. } => sort.clone(),
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Variables in left-to-right first-occurrence order.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = VarSet::default();
        self.collect_vars(&mut out);
        out.into_iter().collect()
    }

    pub(crate) fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App { args, .. } => args.iter().any(|a| a.contains_var(v)),
            _ => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App { args, .. } => args.iter().all(Term::is_ground),
            _ => true,
        }
    }

    /// `self` occurs in `other` (reflexively).
    pub fn is_subterm_of(&self, other: &Term) -> bool {
        self == other || self.is_strict_subterm_of(other)
    }

    pub fn is_strict_subterm_of(&self, other: &Term) -> bool {
        match other {
            Term::App { args, .. } => args.iter().any(|a| self.is_subterm_of(a)),
            _ => false,
        }
    }

    /// Simultaneous application: bound variables are replaced once, images
    /// are not rewritten further. Triangular substitutions must go through
    /// [`resolve`] first.
    pub fn apply(&self, s: &Subst) -> Term {
        match self {
            Term::Var(v) => match s.get(v) {
                Some(t) => t.clone(),
                None => self.clone(),
            },
            Term::App { ctor, sort, args } => Term::App {
                ctor: ctor.clone(),
                sort: sort.clone(),
                args: args.iter().map(|a| a.apply(s)).collect(),
            },
            _ => self.clone(),
        }
    }

    pub fn rename(&self, map: &Renaming) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::App { ctor, sort, args } => Term::App {
                ctor: ctor.clone(),
                sort: sort.clone(),
                args: args.iter().map(|a| a.rename(map)).collect(),
            },
            _ => self.clone(),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Int(n) => write!(f, "{n}"),
            Term::Bool(b) => write!(f, "{b}"),
            Term::App { ctor, args, .. } => {
                write!(f, "{ctor}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Substitution. Bindings built by unification are triangular until passed
/// through [`resolve`].
pub type Subst = IndexMap<Var, Term, FxBuildHasher>;

/// Variable-to-variable renaming.
pub type Renaming = HashMap<Var, Var, FxBuildHasher>;

/// Variables in first-occurrence order.
pub(crate) type VarSet = IndexSet<Var, FxBuildHasher>;

fn walk<'a>(mut t: &'a Term, s: &'a Subst) -> &'a Term {
    while let Term::Var(v) = t {
        match s.get(v) {
            Some(next) => t = next,
            None => break,
        }
    }
    t
}

fn occurs(v: &Var, t: &Term, s: &Subst) -> bool {
    match walk(t, s) {
        Term::Var(w) => w == v,
        Term::App { args, .. } => args.iter().any(|a| occurs(v, a, s)),
        _ => false,
    }
}

/// Extends `s` to a unifier of `a` and `b` (with occurs check).
pub fn unify_terms(a: &Term, b: &Term, s: &mut Subst) -> bool {
    let (a, b) = (walk(a, s), walk(b, s));
    match (a, b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if x.sort != t.sort() || occurs(x, t, s) {
                return false;
            }
            let (x, t) = (x.clone(), t.clone());
            s.insert(x, t);
            true
        }
        (Term::Int(m), Term::Int(n)) => m == n,
        (Term::Bool(m), Term::Bool(n)) => m == n,
        (
            Term::App { ctor: c1, args: a1, .. },
            Term::App { ctor: c2, args: a2, .. },
        ) => {
            if c1 != c2 || a1.len() != a2.len() {
                return false;
            }
            let (a1, a2) = (a1.clone(), a2.clone());
            a1.iter().zip(&a2).all(|(x, y)| unify_terms(x, y, s))
        }
        _ => false,
    }
}

/// Most general unifier of two term tuples, returned in idempotent form.
pub fn unify_all(xs: &[Term], ys: &[Term]) -> Option<Subst> {
    if xs.len() != ys.len() {
        return None;
    }
    let mut s = Subst::default();
    for (x, y) in xs.iter().zip(ys) {
        if !unify_terms(x, y, &mut s) {
            return None;
        }
    }
    Some(resolve(&s))
}

/// Rewrites a triangular substitution into an idempotent one.
pub fn resolve(s: &Subst) -> Subst {
    fn deep(t: &Term, s: &Subst) -> Term {
        match walk(t, s) {
            Term::App { ctor, sort, args } => Term::App {
                ctor: ctor.clone(),
                sort: sort.clone(),
                args: args.iter().map(|a| deep(a, s)).collect(),
            },
            other => other.clone(),
        }
    }
    s.iter().map(|(v, t)| (v.clone(), deep(t, s))).collect()
}

/// One-way matching: extends `s` so that `pattern·s == target`.
/// Only variables of `pattern` are bound; `target` is treated as ground.
pub fn match_term(pattern: &Term, target: &Term, s: &mut Subst) -> bool {
    match pattern {
        Term::Var(v) => match s.get(v) {
            Some(bound) => bound == target,
            None => {
                if v.sort != target.sort() {
                    return false;
                }
                s.insert(v.clone(), target.clone());
                true
            }
        },
        Term::App { ctor, args, .. } => match target {
            Term::App {
                ctor: c2, args: a2, ..
            } => {
                ctor == c2
                    && args.len() == a2.len()
                    && args.iter().zip(a2).all(|(p, t)| match_term(p, t, s))
            }
            _ => false,
        },
        _ => pattern == target,
    }
}

/// Generator of variable names that are fresh with respect to everything it
/// has been seeded with. Names have the shape `Base_N`.
#[derive(Debug, Clone, Default)]
pub struct VarGen {
    next: u64,
}

impl VarGen {
    pub fn new() -> Self {
        VarGen { next: 1 }
    }

    /// Ensures future names do not clash with `name`.
    pub fn observe(&mut self, name: &str) {
        if let Some((_, n)) = split_suffix(name) {
            if n >= self.next {
                self.next = n + 1;
            }
        }
    }

    pub fn fresh(&mut self, base: &str, sort: Sort) -> Var {
        let stem = split_suffix(base).map(|(s, _)| s).unwrap_or(base);
        let stem = if stem.is_empty() { "V" } else { stem };
        let n = self.next;
        self.next += 1;
        Var::new(&format!("{stem}_{n}"), sort)
    }

    pub fn fresh_like(&mut self, v: &Var) -> Var {
        self.fresh(&v.name, v.sort.clone())
    }
}

fn split_suffix(name: &str) -> Option<(&str, u64)> {
    let idx = name.rfind('_')?;
    let n = name[idx + 1..].parse().ok()?;
    Some((&name[..idx], n))
}
