use super::matching::image;
use super::{RuleError, RuleKind, Step, Transformer, Violation};
use crate::constraint::entails;
use crate::model::{Clause, ClauseId, Subst, Term, Var, VarSet};

impl Transformer {
    /// R3. Folds the body atoms of `c` at positions `at` using definition
    /// `def`, where `at[k]` is the position of the image of the `k`-th body
    /// atom of the definition under `theta`. The folded atom takes the place
    /// of the first replaced atom.
    ///
    /// Condition E is checked and recorded; a violation marks the result.
    pub fn fold(&mut self, c: &Clause, def: ClauseId, at: &[usize], theta: &Subst) -> Result<Clause, RuleError> {
        self.fold_with(c, def, at, theta, true)
    }

    /// As [`fold`](Self::fold); with `enforce_level` false the level
    /// constraint is added even if it makes the store unsatisfiable.
    pub(crate) fn fold_with(
        &mut self,
        c: &Clause,
        def: ClauseId,
        at: &[usize],
        theta: &Subst,
        enforce_level: bool,
    ) -> Result<Clause, RuleError> {
        let d = self.definition(def).ok_or(RuleError::NotADefinition(def))?.clause.clone();
        let k = d.head.as_ref().expect("definitions have a head");
        if at.len() != d.body.len()
            || at.iter().any(|&i| i >= c.body.len())
            || (1..at.len()).any(|i| at[..i].contains(&at[i]))
            || d.body.iter().zip(at).any(|(b, &i)| b.apply(theta) != c.body[i])
        {
            return Err(RuleError::NoMatch(c.id, def));
        }
        let dc = d.apply(theta).constraint;
        if !entails(&c.constraint, &dc) {
            return Err(RuleError::NotEntailed(c.id, def));
        }
        if let Some(h) = c.head_pred() {
            let (h, kp) = (h.to_string(), k.pred.clone());
            if !enforce_level {
                self.levels.ge(&h, &kp);
            } else if !self.levels.try_add(|l| l.ge(&h, &kp)) {
                return Err(RuleError::Level(format!("l({h}) >= l({kp})")));
            }
        }
        let violations = condition_e(c, &d, at, theta);
        let first = *at.iter().min().unwrap_or(&c.body.len());
        let mut body = Vec::new();
        for (i, a) in c.body.iter().enumerate() {
            if i == first {
                body.push(k.apply(theta));
            }
            if !at.contains(&i) {
                body.push(a.clone());
            }
        }
        if at.is_empty() {
            body.push(k.apply(theta));
        }
        let id = self.fresh_id();
        let mut r = Clause::new(id, c.head.clone(), c.constraint.clone(), body);
        r.normalize(&mut self.gen);
        let mut step = Step::new(RuleKind::Fold, vec![c.id], vec![id]);
        step.uses = Some(def);
        step.detail = show_subst(theta);
        step.violations = violations;
        self.ledger.record(step);
        Ok(r)
    }
}

/// Condition E for folding `c` with `d` via `theta`: every variable of the
/// definition that is not in its head must be mapped to a variable that
/// occurs nowhere else in the clause (E1), and to distinct variables (E2).
fn condition_e(c: &Clause, d: &Clause, at: &[usize], theta: &Subst) -> Vec<Violation> {
    let head_vars = d.head.as_ref().map(|h| h.vars()).unwrap_or_default();
    let local: Vec<Var> = d.vars().into_iter().filter(|v| !head_vars.contains(v)).collect();
    let mut rest: VarSet = VarSet::default();
    if let Some(h) = &c.head {
        h.args.iter().for_each(|t| t.collect_vars(&mut rest));
    }
    rest.extend(c.constraint.vars());
    for (i, a) in c.body.iter().enumerate() {
        if !at.contains(&i) {
            a.args.iter().for_each(|t| t.collect_vars(&mut rest));
        }
    }
    let mut out = Vec::new();
    for x in &local {
        match image(x, theta) {
            Term::Var(w) if !rest.contains(&w) => {
                let clash = local
                    .iter()
                    .filter(|y| *y != x)
                    .any(|y| image(y, theta).contains_var(&w));
                if clash {
                    out.push(Violation::E2(x.to_string()));
                }
            }
            _ => out.push(Violation::E1(x.to_string())),
        }
    }
    out
}

pub(crate) fn show_subst(s: &Subst) -> String {
    let parts: Vec<String> = s.iter().filter(|(v, t)| &Term::Var((*v).clone()) != *t).map(|(v, t)| format!("{v}/{t}")).collect();
    format!("{{{}}}", parts.join(","))
}
