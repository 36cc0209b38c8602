use super::{RuleError, RuleKind, Step, Transformer};
use crate::constraint::{sat_with, Constraint, Sat3};
use crate::model::{unify_all, Clause, Term, VarSet};

impl Transformer {
    /// R4. Records the deletion of `c` and returns true iff its constraint
    /// is unsatisfiable.
    pub fn delete(&mut self, c: &Clause) -> bool {
        if sat_with(&c.constraint, self.ceiling) != Sat3::Unsat {
            return false;
        }
        self.ledger.record(Step::new(RuleKind::Delete, vec![c.id], vec![]));
        true
    }

    /// Atoms `i < j` of `c` are calls of the same functional predicate on
    /// identical inputs.
    pub fn functional_pair(&self, c: &Clause, i: usize, j: usize) -> bool {
        let (Some(a), Some(b)) = (c.body.get(i), c.body.get(j)) else {
            return false;
        };
        if i == j || a.pred != b.pred {
            return false;
        }
        match self.mode(&a.pred) {
            Ok(m) => m.functional && m.input_args(a).eq(m.input_args(b)),
            Err(_) => false,
        }
    }

    /// R5. Replaces `F(X;Y), F(X;Z)` at positions `i`, `j` by `Y = Z` and a
    /// single copy. ADT outputs are equated by substitution; if they clash
    /// the result has the constraint `false`.
    pub fn functionality(&mut self, c: &Clause, i: usize, j: usize) -> Result<Clause, RuleError> {
        if !self.functional_pair(c, i, j) {
            return Err(RuleError::NotFunctionalPair(c.id, i, j));
        }
        let m = self.mode(&c.body[i].pred)?.clone();
        let ys: Vec<Term> = m.output_args(&c.body[i]).cloned().collect();
        let zs: Vec<Term> = m.output_args(&c.body[j]).cloned().collect();
        let id = self.fresh_id();
        let mut body = c.body.clone();
        body.remove(j);
        let mut r = match unify_all(&zs, &ys) {
            Some(theta) => Clause::new(id, c.head.clone(), c.constraint.clone(), body).apply(&theta),
            None => Clause::new(id, c.head.clone(), Constraint::bottom(), body),
        };
        r.normalize(&mut self.gen);
        r.simplify();
        let mut step = Step::new(RuleKind::Functionality, vec![c.id], vec![id]);
        step.detail = format!("{} ~ {}", c.body[i], c.body[j]);
        self.ledger.record(step);
        Ok(r)
    }

    /// The atom at `pos` is total and none of its output variables occurs
    /// anywhere else in `c`.
    pub fn removable(&self, c: &Clause, pos: usize) -> bool {
        let Some(a) = c.body.get(pos) else { return false };
        let Ok(m) = self.mode(&a.pred) else { return false };
        if !m.total {
            return false;
        }
        let outs = m.output_vars(a);
        let ins = m.input_vars(a);
        let mut rest: VarSet = VarSet::default();
        if let Some(h) = &c.head {
            h.args.iter().for_each(|t| t.collect_vars(&mut rest));
        }
        rest.extend(c.constraint.vars());
        for (k, b) in c.body.iter().enumerate() {
            if k != pos {
                b.args.iter().for_each(|t| t.collect_vars(&mut rest));
            }
        }
        outs.iter().all(|v| !rest.contains(v) && !ins.contains(v))
    }

    /// R6. Removes the total atom at `pos` whose outputs are unused.
    pub fn totality(&mut self, c: &Clause, pos: usize) -> Result<Clause, RuleError> {
        if !self.removable(c, pos) {
            return Err(RuleError::OutputsUsed(c.id, pos));
        }
        let id = self.fresh_id();
        let mut body = c.body.clone();
        let gone = body.remove(pos);
        let r = Clause::new(id, c.head.clone(), c.constraint.clone(), body);
        let mut step = Step::new(RuleKind::Totality, vec![c.id], vec![id]);
        step.detail = format!("drops {gone}");
        self.ledger.record(step);
        Ok(r)
    }
}
