use super::fold::show_subst;
use super::matching::locate;
use super::{RuleError, RuleKind, Step, Transformer, Violation};
use crate::constraint::entails;
use crate::model::query::source_vars;
use crate::model::{Atom, Clause, ClauseId, Subst, Var, VarSet};

impl Transformer {
    /// R7. Replaces the conjunction `F(X;Y)` at positions `f_pos` of `c` by
    /// `R(V;W), diff(Z)`, where the body of definition `diff` instantiated
    /// by `theta` is `F(X;Y), R(V;W)` up to reordering.
    ///
    /// Conditions F2 and F3 are checked and recorded; a violation marks the
    /// result.
    pub fn diff_replace(
        &mut self,
        c: &Clause,
        f_pos: &[usize],
        r: &[Atom],
        diff: ClauseId,
        theta: &Subst,
    ) -> Result<Clause, RuleError> {
        let d = self.definition(diff).ok_or(RuleError::NotADefinition(diff))?.clause.clone();
        if f_pos.is_empty() || f_pos.iter().any(|&i| i >= c.body.len()) {
            return Err(RuleError::NoMatch(c.id, diff));
        }
        let f: Vec<Atom> = f_pos.iter().map(|&i| c.body[i].clone()).collect();
        let expected: Vec<Atom> = f.iter().chain(r).cloned().collect();
        let inst: Vec<Atom> = d.body.iter().map(|a| a.apply(theta)).collect();
        if inst.len() != expected.len() || locate(&inst, &expected).is_none() {
            return Err(RuleError::NoMatch(c.id, diff));
        }
        for a in &expected {
            let m = self.mode(&a.pred)?;
            if !(m.total && m.functional) {
                return Err(RuleError::NotDeclared(a.pred.to_string(), "total and functional"));
            }
        }
        let v = source_vars(r, self.modes())?;
        let w: Vec<Var> = vars_of(r).into_iter().filter(|x| !v.contains(x)).collect();
        let cvars = c.vars();
        if let Some(x) = w.iter().find(|x| cvars.contains(x)) {
            return Err(RuleError::OutputClash(x.to_string()));
        }
        let dc = d.apply(theta).constraint;
        if !entails(&c.constraint, &dc) {
            return Err(RuleError::NotEntailed(c.id, diff));
        }
        let dhead = d.head.as_ref().unwrap().apply(theta);
        if let Some(h) = c.head_pred() {
            let (h, p) = (h.to_string(), dhead.pred.clone());
            if !self.levels.try_add(|l| l.gt(&h, &p)) {
                return Err(RuleError::Level(format!("l({h}) > l({p})")));
            }
        }

        let x = source_vars(&f, self.modes())?;
        let y: Vec<Var> = vars_of(&f).into_iter().filter(|v| !x.contains(v)).collect();
        let mut violations = Vec::new();
        let dvars = dc.vars();
        for yv in &y {
            if v.contains(yv) || dvars.contains(yv) {
                violations.push(Violation::F2(yv.to_string()));
            }
        }
        let mut others: Vec<Var> = Vec::new();
        if let Some(h) = &c.head {
            others.extend(h.adt_vars());
        }
        for (i, a) in c.body.iter().enumerate() {
            if !f_pos.contains(&i) {
                others.extend(a.adt_vars());
            }
        }
        for yv in y.iter().filter(|v| !v.is_basic()) {
            if others.contains(yv) {
                violations.push(Violation::F3(yv.to_string()));
            }
        }

        let first = *f_pos.iter().min().unwrap();
        let mut body = Vec::new();
        for (i, a) in c.body.iter().enumerate() {
            if i == first {
                body.extend(r.iter().cloned());
                body.push(dhead.clone());
            }
            if !f_pos.contains(&i) {
                body.push(a.clone());
            }
        }
        let id = self.fresh_id();
        let mut out = Clause::new(id, c.head.clone(), c.constraint.clone(), body);
        out.normalize(&mut self.gen);
        let mut step = Step::new(RuleKind::DiffReplace, vec![c.id], vec![id]);
        step.uses = Some(diff);
        step.detail = show_subst(theta);
        step.violations = violations;
        self.ledger.record(step);
        Ok(out)
    }
}

fn vars_of(g: &[Atom]) -> Vec<Var> {
    let mut out = VarSet::default();
    for a in g {
        a.args.iter().for_each(|t| t.collect_vars(&mut out));
    }
    out.into_iter().collect()
}
