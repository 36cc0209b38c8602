use std::ops::Range;

use super::{RuleError, RuleKind, Step, Transformer};
use crate::constraint::{sat_with, Sat3};
use crate::model::{unify, Clause, Term};

/// A clause produced by unfolding; `derived` are the body positions that
/// come from the body of the resolved clause.
#[derive(Debug, Clone)]
pub struct Unfolded {
    pub clause: Clause,
    pub derived: Range<usize>,
}

impl Transformer {
    /// R2. Unfolds `c` w.r.t. its body atom at `pos` using the definite
    /// input clauses. Resolvents with an unsatisfiable constraint are dropped.
    pub fn unfold(&mut self, c: &Clause, pos: usize) -> Result<Vec<Unfolded>, RuleError> {
        let a = c.body.get(pos).cloned().ok_or(RuleError::NoSuchAtom(c.id, pos))?;
        let candidates: Vec<Clause> = self.problem.clauses_for(&a.pred).cloned().collect();
        let probes = self.probes.get(&a.pred).cloned().unwrap_or_default();
        let mut out = Vec::new();
        for (i, k) in candidates.into_iter().enumerate() {
            // Probing first avoids freshening clauses that cannot apply.
            if probes.get(i).is_some_and(|p| unify(&a, p.head.as_ref().unwrap()).is_none()) {
                continue;
            }
            let k = k.rename_apart(&mut self.gen);
            let Some(theta) = unify(&a, k.head.as_ref().unwrap()) else {
                continue;
            };
            let joined = Clause::new(c.id, c.head.clone(), c.constraint.and(&k.constraint), Vec::new()).apply(&theta);
            if sat_with(&joined.constraint, self.ceiling) == Sat3::Unsat {
                continue;
            }
            let mut body: Vec<_> = c.body[..pos].iter().map(|b| b.apply(&theta)).collect();
            body.extend(k.body.iter().map(|b| b.apply(&theta)));
            body.extend(c.body[pos + 1..].iter().map(|b| b.apply(&theta)));
            let id = self.fresh_id();
            let mut r = Clause::new(id, joined.head, joined.constraint, body);
            r.normalize(&mut self.gen);
            r.simplify();
            out.push(Unfolded {
                clause: r,
                derived: pos..pos + k.body.len(),
            });
        }
        let mut step = Step::new(RuleKind::Unfold, vec![c.id], out.iter().map(|u| u.clause.id).collect());
        step.detail = format!("on {}/{} at {pos}", a.pred, a.args.len());
        step.same_level = c
            .head_pred()
            .is_some_and(|h| self.levels.entails_eq(h, &a.pred));
        self.ledger.record(step);
        Ok(out)
    }

    /// The atom at `pos` does not get its inputs instantiated by any
    /// input clause it unifies with under a satisfiable constraint.
    pub fn is_head_instance(&self, c: &Clause, pos: usize) -> Result<bool, RuleError> {
        let a = c.body.get(pos).ok_or(RuleError::NoSuchAtom(c.id, pos))?;
        let inputs = self.mode(&a.pred)?.input_vars(a);
        let Some(candidates) = self.probes.get(&a.pred) else {
            return Ok(true);
        };
        let mut own_sat = None;
        for k in candidates {
            let Some(theta) = unify(a, k.head.as_ref().unwrap()) else {
                continue;
            };
            let mut images = Vec::new();
            let renaming = inputs.iter().all(|v| match Term::Var(v.clone()).apply(&theta) {
                Term::Var(w) if !images.contains(&w) => {
                    images.push(w);
                    true
                }
                _ => false,
            });
            if renaming {
                continue;
            }
            let sat = if k.constraint.atoms().is_empty() && c.constraint.vars().iter().all(|v| !theta.contains_key(v)) {
                // The candidate leaves the clause constraint as it is.
                *own_sat.get_or_insert_with(|| sat_with(&c.constraint, self.ceiling))
            } else {
                let joined = c.constraint.and(&k.constraint);
                let joined = Clause::new(c.id, None, joined, Vec::new()).apply(&theta).constraint;
                sat_with(&joined, self.ceiling)
            };
            if sat != Sat3::Unsat {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
