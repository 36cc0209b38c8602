//! Record of every rule application, with completeness marks and the
//! bookkeeping needed for the Condition-U audit.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::model::ClauseId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Define,
    Unfold,
    Fold,
    Delete,
    Functionality,
    Totality,
    DiffReplace,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleKind::Define => "define",
            RuleKind::Unfold => "unfold",
            RuleKind::Fold => "fold",
            RuleKind::Delete => "delete",
            RuleKind::Functionality => "functionality",
            RuleKind::Totality => "totality",
            RuleKind::DiffReplace => "diff-replace",
        };
        f.write_str(s)
    }
}

/// A side condition whose failure costs completeness (not soundness).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    /// Folding maps a body-only variable to a non-variable or to a variable
    /// occurring elsewhere in the clause.
    E1(String),
    /// Folding maps two body-only variables to overlapping terms.
    E2(String),
    /// An output of the replaced conjunction occurs in the replacement's
    /// inputs or in the difference constraint.
    F2(String),
    /// An ADT output of the replaced conjunction occurs elsewhere.
    F3(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::E1(v) => write!(f, "E1({v})"),
            Violation::E2(v) => write!(f, "E2({v})"),
            Violation::F2(v) => write!(f, "F2({v})"),
            Violation::F3(v) => write!(f, "F3({v})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleKind,
    pub inputs: Vec<ClauseId>,
    /// Definition used by a fold or a differential replacement.
    pub uses: Option<ClauseId>,
    pub outputs: Vec<ClauseId>,
    /// Printed substitution or atom, for the trace.
    pub detail: String,
    /// Unfolding w.r.t. an atom whose level equals the head's.
    pub same_level: bool,
    pub violations: Vec<Violation>,
}

impl Step {
    pub fn new(rule: RuleKind, inputs: Vec<ClauseId>, outputs: Vec<ClauseId>) -> Self {
        Step {
            rule,
            inputs,
            uses: None,
            outputs,
            detail: String::new(),
            same_level: false,
            violations: Vec::new(),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids = |v: &[ClauseId]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{} [{}] -> [{}]", self.rule, ids(&self.inputs), ids(&self.outputs))?;
        if let Some(d) = self.uses {
            write!(f, " using {d}")?;
        }
        if self.same_level {
            write!(f, " same-level")?;
        }
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        for v in &self.violations {
            write!(f, " !{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Ledger {
    steps: Vec<Step>,
    roots: HashSet<ClauseId>,
    parents: HashMap<ClauseId, Vec<ClauseId>>,
    marked: BTreeSet<ClauseId>,
}

impl Ledger {
    /// `initial` are the ids of the input clauses.
    pub fn new(initial: impl IntoIterator<Item = ClauseId>) -> Self {
        Ledger {
            roots: initial.into_iter().collect(),
            ..Default::default()
        }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn record(&mut self, step: Step) {
        let sources: Vec<ClauseId> = step.inputs.iter().copied().chain(step.uses).collect();
        let marked = !step.violations.is_empty() || sources.iter().any(|i| self.marked.contains(i));
        if step.rule == RuleKind::Define {
            self.roots.extend(step.outputs.iter().copied());
        }
        for o in &step.outputs {
            if !sources.is_empty() {
                self.parents.entry(*o).or_default().extend(sources.iter().copied());
            }
            if marked {
                self.marked.insert(*o);
            }
        }
        self.steps.push(step);
    }

    /// Marks a clause explicitly (used when a scenario is assembled by hand).
    pub fn mark(&mut self, id: ClauseId) {
        self.marked.insert(id);
    }

    pub fn is_marked(&self, id: ClauseId) -> bool {
        self.marked.contains(&id)
    }

    pub fn marked(&self) -> &BTreeSet<ClauseId> {
        &self.marked
    }

    pub fn definitions(&self) -> impl Iterator<Item = ClauseId> + '_ {
        self.steps
            .iter()
            .filter(|s| s.rule == RuleKind::Define)
            .flat_map(|s| s.outputs.iter().copied())
    }

    /// Definitions used for folding that were never unfolded w.r.t. an
    /// atom of their own level. Empty iff Condition U holds.
    pub fn u_violations(&self) -> Vec<ClauseId> {
        let discharged: HashSet<ClauseId> = self
            .steps
            .iter()
            .filter(|s| s.rule == RuleKind::Unfold && s.same_level)
            .flat_map(|s| s.inputs.iter().copied())
            .collect();
        let mut out: Vec<ClauseId> = self
            .steps
            .iter()
            .filter(|s| s.rule == RuleKind::Fold)
            .filter_map(|s| s.uses)
            .filter(|d| !discharged.contains(d))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn u_audit(&self) -> Result<(), Vec<ClauseId>> {
        let v = self.u_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// Ids among `ids` whose ancestry does not bottom out in input clauses
    /// or definitions.
    pub fn disconnected(&self, ids: impl IntoIterator<Item = ClauseId>) -> Vec<ClauseId> {
        let mut ok: HashSet<ClauseId> = HashSet::new();
        let mut out = Vec::new();
        for id in ids {
            if !self.traces(id, &mut ok, &mut HashSet::new()) {
                out.push(id);
            }
        }
        out
    }

    fn traces(&self, id: ClauseId, ok: &mut HashSet<ClauseId>, seen: &mut HashSet<ClauseId>) -> bool {
        if self.roots.contains(&id) || ok.contains(&id) {
            return true;
        }
        if !seen.insert(id) {
            return false;
        }
        let good = match self.parents.get(&id) {
            Some(ps) => !ps.is_empty() && ps.iter().all(|p| self.traces(*p, ok, seen)),
            None => false,
        };
        if good {
            ok.insert(id);
        }
        good
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        if !self.marked.is_empty() {
            let m: Vec<String> = self.marked.iter().map(|i| i.to_string()).collect();
            writeln!(f, "marked: {}", m.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(n: u32) -> ClauseId {
        ClauseId(n)
    }

    #[test]
    fn marks_propagate_to_descendants() {
        let mut l = Ledger::new([id(1)]);
        let mut s = Step::new(RuleKind::Fold, vec![id(1)], vec![id(2)]);
        s.violations.push(Violation::E1("X".into()));
        l.record(s);
        l.record(Step::new(RuleKind::Unfold, vec![id(2)], vec![id(3), id(4)]));
        assert!(l.is_marked(id(3)) && l.is_marked(id(4)));
        assert!(!l.is_marked(id(1)));
    }

    #[test]
    fn fold_without_unfold_fails_audit() {
        let mut l = Ledger::new([id(1), id(2)]);
        l.record(Step::new(RuleKind::Define, vec![], vec![id(3)]));
        let mut f = Step::new(RuleKind::Fold, vec![id(1)], vec![id(4)]);
        f.uses = Some(id(3));
        l.record(f);
        assert_eq!(l.u_audit(), Err(vec![id(3)]));
        let mut u = Step::new(RuleKind::Unfold, vec![id(3)], vec![id(5)]);
        u.same_level = true;
        l.record(u);
        assert_eq!(l.u_audit(), Ok(()));
    }

    #[test]
    fn connectivity() {
        let mut l = Ledger::new([id(1)]);
        l.record(Step::new(RuleKind::Unfold, vec![id(1)], vec![id(2)]));
        assert!(l.disconnected([id(2)]).is_empty());
        assert_eq!(l.disconnected([id(9)]), vec![id(9)]);
    }
}
