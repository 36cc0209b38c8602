//! Conjunctions of linear integer / boolean constraints and the decision
//! procedures the transformation needs: satisfiability, entailment,
//! projection and widening.

mod fm;
mod linexpr;
mod ops;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::model::{Renaming, Var};

pub use fm::DEFAULT_FM_CEILING;
pub use linexpr::{LinAtom, LinExpr, Norm, Rel};
pub use ops::{entails, is_satisfiable, project, project_with, widen, Sat3};
pub(crate) use ops::sat_with;

/// A conjunction of normalized atoms, or the distinguished `false`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Constraint {
    atoms: Vec<LinAtom>,
    bottom: bool,
}

impl Constraint {
    pub fn top() -> Self {
        Constraint::default()
    }

    pub fn bottom() -> Self {
        Constraint {
            atoms: Vec::new(),
            bottom: true,
        }
    }

    pub fn from_norms(ns: impl IntoIterator<Item = Norm>) -> Self {
        let mut c = Constraint::top();
        for n in ns {
            c.push(n);
        }
        c
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = LinAtom>) -> Self {
        Self::from_norms(atoms.into_iter().map(Norm::Atom))
    }

    pub fn push(&mut self, n: Norm) {
        match n {
            Norm::True => {}
            Norm::False => {
                self.bottom = true;
                self.atoms.clear();
            }
            Norm::Atom(a) => {
                if !self.bottom && !self.atoms.contains(&a) {
                    self.atoms.push(a);
                }
            }
        }
    }

    /// Adds `lhs REL rhs`.
    pub fn add(&mut self, lhs: &LinExpr, rel: Rel, rhs: &LinExpr) {
        self.push(LinAtom::new(lhs, rel, rhs));
    }

    pub fn and(&self, other: &Constraint) -> Constraint {
        if self.bottom || other.bottom {
            return Constraint::bottom();
        }
        let mut c = self.clone();
        for a in &other.atoms {
            c.push(Norm::Atom(a.clone()));
        }
        c
    }

    pub fn atoms(&self) -> &[LinAtom] {
        &self.atoms
    }

    pub fn is_false(&self) -> bool {
        self.bottom
    }

    pub fn is_true(&self) -> bool {
        !self.bottom && self.atoms.is_empty()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for a in &self.atoms {
            for v in a.vars() {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    pub fn mentions(&self, v: &Var) -> bool {
        self.atoms.iter().any(|a| a.mentions(v))
    }

    pub fn substitute(&self, map: &HashMap<Var, LinExpr>) -> Constraint {
        if self.bottom {
            return self.clone();
        }
        Constraint::from_norms(self.atoms.iter().map(|a| a.substitute(map)))
    }

    pub fn rename(&self, map: &Renaming) -> Constraint {
        let m: HashMap<Var, LinExpr> = map.iter().map(|(k, v)| (k.clone(), LinExpr::var(v))).collect();
        self.substitute(&m)
    }

    /// Evaluates under a total assignment of the mentioned variables.
    pub fn holds(&self, model: &HashMap<Var, BigInt>) -> Option<bool> {
        if self.bottom {
            return Some(false);
        }
        for a in &self.atoms {
            if !a.holds(model)? {
                return Some(false);
            }
        }
        Some(true)
    }

    /// Same atoms, sorted; used for stable printing and comparison.
    pub fn sorted(&self) -> Constraint {
        let mut c = self.clone();
        c.atoms.sort();
        c
    }

}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bottom {
            return write!(f, "1 =< 0");
        }
        if self.atoms.is_empty() {
            return write!(f, "true");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
