use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use super::term::{Renaming, Subst, Term, Var, VarGen, VarSet};
use crate::constraint::{Constraint, LinAtom, LinExpr, Norm, Rel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClauseId(pub u32);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: Arc<str>,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom {
            pred: Arc::from(pred),
            args,
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = VarSet::default();
        self.args.iter().for_each(|a| a.collect_vars(&mut out));
        out.into_iter().collect()
    }

    pub fn basic_vars(&self) -> Vec<Var> {
        self.vars().into_iter().filter(Var::is_basic).collect()
    }

    pub fn adt_vars(&self) -> Vec<Var> {
        self.vars().into_iter().filter(|v| !v.is_basic()).collect()
    }

    /// At least one argument has an ADT sort.
    pub fn has_adts(&self) -> bool {
        self.args.iter().any(|a| !a.sort().is_basic())
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.args.iter().any(|a| a.contains_var(v))
    }

    pub fn apply(&self, s: &Subst) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.apply(s)).collect(),
        }
    }

    pub fn rename(&self, map: &Renaming) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.rename(map)).collect(),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
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

/// `head ← constraint, body`. A missing head means `false` (a goal).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub id: ClauseId,
    pub head: Option<Atom>,
    pub constraint: Constraint,
    pub body: Vec<Atom>,
}

/// Basic bindings of a substitution as linear expressions.
pub(crate) fn subst_to_lin(s: &Subst) -> HashMap<Var, LinExpr> {
    s.iter()
        .filter(|(v, _)| v.is_basic())
        .filter_map(|(v, t)| {
            let e = match t {
                Term::Var(w) => LinExpr::var(w),
                Term::Int(n) => LinExpr::constant(*n),
                Term::Bool(b) => LinExpr::constant(i64::from(*b)),
                Term::App { .. } => return None,
            };
            Some((v.clone(), e))
        })
        .collect()
}

impl Clause {
    pub fn new(id: ClauseId, head: Option<Atom>, constraint: Constraint, body: Vec<Atom>) -> Self {
        Clause {
            id,
            head,
            constraint,
            body,
        }
    }

    pub fn is_goal(&self) -> bool {
        self.head.is_none()
    }

    pub fn head_pred(&self) -> Option<&str> {
        self.head.as_ref().map(|h| &*h.pred)
    }

    /// Variables in head, body and constraint (first-occurrence order).
    pub fn vars(&self) -> Vec<Var> {
        let mut out = self.atom_vars();
        for v in self.constraint.vars() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Variables occurring in the head or the body atoms.
    pub fn atom_vars(&self) -> Vec<Var> {
        let mut out = VarSet::default();
        for a in self.head.iter().chain(&self.body) {
            a.args.iter().for_each(|t| t.collect_vars(&mut out));
        }
        out.into_iter().collect()
    }

    /// Every atom (head included) has basic types only.
    pub fn has_basic_types(&self) -> bool {
        self.head.iter().chain(&self.body).all(|a| !a.has_adts())
    }

    pub fn apply(&self, s: &Subst) -> Clause {
        Clause {
            id: self.id,
            head: self.head.as_ref().map(|h| h.apply(s)),
            constraint: self.constraint.substitute(&subst_to_lin(s)),
            body: self.body.iter().map(|a| a.apply(s)).collect(),
        }
    }

    pub fn rename(&self, map: &Renaming) -> Clause {
        Clause {
            id: self.id,
            head: self.head.as_ref().map(|h| h.rename(map)),
            constraint: self.constraint.rename(map),
            body: self.body.iter().map(|a| a.rename(map)).collect(),
        }
    }

    /// A copy whose variables are all fresh.
    pub fn rename_apart(&self, gen: &mut VarGen) -> Clause {
        let map: Renaming = self.vars().into_iter().map(|v| (v.clone(), gen.fresh_like(&v))).collect();
        self.rename(&map)
    }

    /// Re-establishes the atom discipline: every top-level argument of basic
    /// sort is a variable, distinct within its atom. Offending arguments are
    /// replaced left to right by fresh variables tied by an equality.
    pub fn normalize(&mut self, gen: &mut VarGen) {
        let mut extra: Vec<Norm> = Vec::new();
        let mut fix = |atom: &mut Atom| {
            let mut seen: Vec<Var> = Vec::new();
            for arg in atom.args.iter_mut() {
                if !arg.sort().is_basic() {
                    continue;
                }
                let replace = match arg {
                    Term::Var(v) => seen.contains(v),
                    _ => true,
                };
                if replace {
                    let f = gen.fresh("V", arg.sort());
                    let rhs = match arg {
                        Term::Var(v) => LinExpr::var(v),
                        Term::Int(n) => LinExpr::constant(*n),
                        Term::Bool(b) => LinExpr::constant(i64::from(*b)),
                        Term::App { .. } => unreachable!("basic-sorted term is never an application"),
                    };
                    extra.push(LinAtom::new(&LinExpr::var(&f), Rel::Eq, &rhs));
                    *arg = Term::Var(f.clone());
                    seen.push(f);
                } else if let Term::Var(v) = arg {
                    seen.push(v.clone());
                }
            }
        };
        if let Some(h) = self.head.as_mut() {
            fix(h);
        }
        for a in self.body.iter_mut() {
            fix(a);
        }
        for n in extra {
            self.constraint.push(n);
        }
    }

    /// Exact simplification: eliminates constraint-only variables that are
    /// defined by a unit-coefficient equality.
    pub fn simplify(&mut self) {
        if self.constraint.is_false() {
            return;
        }
        let keep: Vec<Var> = self
            .constraint
            .vars()
            .into_iter()
            .filter(|v| self.head.iter().chain(&self.body).any(|a| a.args.iter().any(|t| t.contains_var(v))))
            .collect();
        loop {
            let pick = self.constraint.atoms().iter().find_map(|a| {
                if a.rel != Rel::Eq {
                    return None;
                }
                a.coeffs
                    .iter()
                    .find(|(v, c)| !keep.contains(v) && c.magnitude().is_one())
                    .map(|(v, _)| (a.clone(), v.clone()))
            });
            let Some((eq, v)) = pick else { break };
            let a = eq.coeffs[&v].clone();
            let mut rest = eq.lhs();
            rest.coeffs.remove(&v);
            let val = LinExpr::constant(eq.rhs.clone()).sub(&rest).scale(&a);
            let map = HashMap::from([(v, val)]);
            let others: Vec<LinAtom> = self.constraint.atoms().iter().filter(|x| **x != eq).cloned().collect();
            self.constraint = Constraint::from_norms(others.iter().map(|x| x.substitute(&map)));
        }
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Some(h) => write!(f, "{h}")?,
            None => write!(f, "false")?,
        }
        let mut parts: Vec<String> = Vec::new();
        if self.constraint.is_false() {
            parts.push("1 =< 0".into());
        } else {
            parts.extend(self.constraint.atoms().iter().map(|a| a.to_string()));
        }
        parts.extend(self.body.iter().map(|a| a.to_string()));
        if !parts.is_empty() {
            write!(f, " :- {}", parts.join(", "))?;
        }
        write!(f, ".")
    }
}

/// Per-predicate split of argument positions into inputs and outputs plus
/// declared totality/functionality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModeSignature {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub total: bool,
    pub functional: bool,
}

impl ModeSignature {
    pub fn new(inputs: Vec<usize>, outputs: Vec<usize>) -> Self {
        ModeSignature {
            inputs,
            outputs,
            total: false,
            functional: false,
        }
    }

    pub fn total_functional(mut self) -> Self {
        self.total = true;
        self.functional = true;
        self
    }

    pub fn input_args<'a>(&'a self, a: &'a Atom) -> impl Iterator<Item = &'a Term> + 'a {
        self.inputs.iter().filter_map(move |&i| a.args.get(i))
    }

    pub fn output_args<'a>(&'a self, a: &'a Atom) -> impl Iterator<Item = &'a Term> + 'a {
        self.outputs.iter().filter_map(move |&i| a.args.get(i))
    }

    pub fn input_vars(&self, a: &Atom) -> Vec<Var> {
        let mut out = VarSet::default();
        self.input_args(a).for_each(|t| t.collect_vars(&mut out));
        out.into_iter().collect()
    }

    pub fn output_vars(&self, a: &Atom) -> Vec<Var> {
        let mut out = VarSet::default();
        self.output_args(a).for_each(|t| t.collect_vars(&mut out));
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sort;

    #[test]
    fn normalize_constant_argument() {
        // p(3).  →  p(V) :- V = 3.
        let mut c = Clause::new(ClauseId(1), Some(Atom::new("p", vec![Term::Int(3)])), Constraint::top(), vec![]);
        let mut g = VarGen::new();
        c.normalize(&mut g);
        let v = c.head.as_ref().unwrap().args[0].as_var().unwrap().clone();
        assert_eq!(c.constraint.atoms().len(), 1);
        let m = HashMap::from([(v, 3.into())]);
        assert_eq!(c.constraint.holds(&m), Some(true));
    }

    #[test]
    fn normalize_repeated_variable() {
        let x = Term::Var(Var::int("X"));
        let mut c = Clause::new(ClauseId(1), None, Constraint::top(), vec![Atom::new("q", vec![x.clone(), x])]);
        c.normalize(&mut VarGen::new());
        let args = &c.body[0].args;
        assert_ne!(args[0], args[1]);
        assert_eq!(c.constraint.atoms().len(), 1);
    }

    #[test]
    fn nested_basic_repeats_are_left_alone() {
        // snoc([],Y,[Y])
        let l = Sort::adt("list");
        let y = Term::Var(Var::int("Y"));
        let one = Term::app("cons", l.clone(), vec![y.clone(), Term::app("nil", l.clone(), vec![])]);
        let mut c = Clause::new(
            ClauseId(6),
            Some(Atom::new("snoc", vec![Term::app("nil", l, vec![]), y, one])),
            Constraint::top(),
            vec![],
        );
        let before = c.clone();
        c.normalize(&mut VarGen::new());
        assert_eq!(c, before);
    }

    #[test]
    fn simplify_eliminates_local_variables() {
        // diff(X,A,B) :- B = N+1, N = 0, A = 0.
        let (a, b, n, x) = (Var::int("A"), Var::int("B"), Var::int("N"), Var::int("X"));
        let mut k = Constraint::top();
        k.add(&LinExpr::var(&b), Rel::Eq, &LinExpr::var(&n).add(&LinExpr::constant(1)));
        k.add(&LinExpr::var(&n), Rel::Eq, &LinExpr::constant(0));
        k.add(&LinExpr::var(&a), Rel::Eq, &LinExpr::constant(0));
        let head = Atom::new("diff", vec![Term::Var(x), Term::Var(a.clone()), Term::Var(b.clone())]);
        let mut c = Clause::new(ClauseId(1), Some(head), k, vec![]);
        c.simplify();
        assert!(!c.constraint.mentions(&n));
        let m = HashMap::from([(a, 0.into()), (b, 1.into())]);
        assert_eq!(c.constraint.holds(&m), Some(true));
    }
}
