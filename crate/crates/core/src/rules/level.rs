//! Symbolic constraints over predicate levels.
//!
//! Every constraint has the shape `ℓ(p) ≥ ℓ(q) + w` with `w ∈ {0, 1}`; the
//! store is satisfiable over the naturals iff the constraint graph has no
//! cycle of positive weight. The least solution is computed by longest-path
//! relaxation.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use indexmap::IndexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelRel {
    Ge,
    Gt,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelConstraint {
    pub lhs: Arc<str>,
    pub rel: LevelRel,
    pub rhs: Arc<str>,
}

impl fmt::Display for LevelConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.rel {
            LevelRel::Ge => ">=",
            LevelRel::Gt => ">",
            LevelRel::Eq => "=",
        };
        write!(f, "l({}) {op} l({})", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, Default)]
pub struct LevelStore {
    preds: IndexSet<Arc<str>>,
    constraints: IndexSet<LevelConstraint>,
    /// `newp ↦ body predicates`, from definitions: `ℓ(newp) = max ℓ(body)`.
    maxes: Vec<(Arc<str>, Vec<Arc<str>>)>,
    sat: OnceLock<bool>,
}

impl LevelStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constraints(&self) -> impl Iterator<Item = &LevelConstraint> {
        self.constraints.iter()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    fn push(&mut self, lhs: &str, rel: LevelRel, rhs: &str) {
        let lhs: Arc<str> = Arc::from(lhs);
        let rhs: Arc<str> = Arc::from(rhs);
        self.preds.insert(lhs.clone());
        self.preds.insert(rhs.clone());
        if self.constraints.insert(LevelConstraint { lhs, rel, rhs }) {
            self.sat = OnceLock::new();
        }
    }

    pub fn ge(&mut self, p: &str, q: &str) {
        if p != q {
            self.push(p, LevelRel::Ge, q);
        }
    }

    pub fn gt(&mut self, p: &str, q: &str) {
        self.push(p, LevelRel::Gt, q);
    }

    pub fn eq(&mut self, p: &str, q: &str) {
        if p != q {
            self.push(p, LevelRel::Eq, q);
        }
    }

    /// `ℓ(newp) = max{ℓ(q) | q ∈ body}`: recorded as `ℓ(newp) ≥ ℓ(q)` for
    /// every `q`; the equality is realized when an unfolding step equates
    /// `newp` with one of them.
    pub fn max_of(&mut self, newp: &str, body: &[Arc<str>]) {
        self.preds.insert(Arc::from(newp));
        for q in body {
            self.ge(newp, q);
        }
        self.maxes.push((Arc::from(newp), body.to_vec()));
    }

    /// Adds the constraints produced by `f` only if the store stays
    /// satisfiable; returns whether they were kept.
    pub fn try_add(&mut self, f: impl FnOnce(&mut LevelStore)) -> bool {
        let mut next = self.clone();
        f(&mut next);
        if next.is_satisfiable() {
            *self = next;
            true
        } else {
            false
        }
    }

    pub fn is_satisfiable(&self) -> bool {
        *self.sat.get_or_init(|| self.solve().is_some())
    }

    /// `ℓ(p) = ℓ(q)` holds in every solution. All weights are non-negative,
    /// so `ℓ(p) ≥ ℓ(q)` is forced exactly when `q` is reachable from `p`.
    pub fn entails_eq(&self, p: &str, q: &str) -> bool {
        p == q || (self.is_satisfiable() && self.reaches(p, q) && self.reaches(q, p))
    }

    fn reaches(&self, from: &str, to: &str) -> bool {
        let mut seen: Vec<&str> = vec![from];
        let mut todo = vec![from];
        while let Some(a) = todo.pop() {
            for c in &self.constraints {
                let next = match c.rel {
                    _ if *c.lhs == *a => &*c.rhs,
                    LevelRel::Eq if *c.rhs == *a => &*c.lhs,
                    _ => continue,
                };
                if next == to {
                    return true;
                }
                if !seen.contains(&next) {
                    seen.push(next);
                    todo.push(next);
                }
            }
        }
        false
    }

    /// Least natural-number solution, or `None` when a strict cycle exists.
    pub fn solve(&self) -> Option<HashMap<Arc<str>, u64>> {
        let idx: HashMap<&Arc<str>, usize> = self.preds.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // edge (a, b, w): level[a] >= level[b] + w
        let mut edges = Vec::new();
        for c in &self.constraints {
            let (a, b) = (idx[&c.lhs], idx[&c.rhs]);
            match c.rel {
                LevelRel::Ge => edges.push((a, b, 0)),
                LevelRel::Gt => edges.push((a, b, 1)),
                LevelRel::Eq => {
                    edges.push((a, b, 0));
                    edges.push((b, a, 0));
                }
            }
        }
        let n = self.preds.len();
        let mut level = vec![0u64; n];
        for round in 0..=n {
            let mut changed = false;
            for &(a, b, w) in &edges {
                if level[a] < level[b] + w {
                    level[a] = level[b] + w;
                    changed = true;
                }
            }
            if !changed {
                return Some(self.preds.iter().cloned().zip(level).collect());
            }
            if round == n {
                break;
            }
        }
        None
    }

    /// Definitions whose level exceeds every body level in the least
    /// solution (the max equation is not realized).
    pub fn unrealized_maxes(&self) -> Vec<Arc<str>> {
        let Some(sol) = self.solve() else {
            return Vec::new();
        };
        self.maxes
            .iter()
            .filter(|(p, body)| !body.is_empty() && body.iter().all(|q| sol[q] < sol[p]))
            .map(|(p, _)| p.clone())
            .collect()
    }
}

impl fmt::Display for LevelStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_cycle_is_unsat() {
        let mut l = LevelStore::new();
        l.ge("a", "b");
        l.ge("b", "c");
        assert!(l.is_satisfiable());
        l.gt("c", "a");
        assert!(!l.is_satisfiable());
    }

    #[test]
    fn tentative_addition_is_rolled_back() {
        let mut l = LevelStore::new();
        l.eq("new1", "append");
        assert!(!l.try_add(|l| l.gt("new1", "append")));
        assert_eq!(l.len(), 1);
        assert!(l.try_add(|l| l.gt("new1", "snoc")));
        let s = l.solve().unwrap();
        assert!(s["new1"] > s["snoc"]);
        assert_eq!(s["new1"], s["append"]);
    }

    #[test]
    fn max_is_realized_through_equality() {
        let mut l = LevelStore::new();
        let body: Vec<Arc<str>> = vec![Arc::from("append"), Arc::from("len")];
        l.max_of("new1", &body);
        l.gt("append", "len");
        assert!(l.unrealized_maxes().is_empty());
        l.gt("new1", "append");
        assert_eq!(l.unrealized_maxes(), vec![Arc::<str>::from("new1")]);
    }

    use proptest::prelude::*;

    const NAMES: [&str; 4] = ["p", "q", "r", "s"];

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        // Forced equality is the same as neither strict order being consistent.
        #[test]
        fn entails_eq_agrees_with_strict_probes(
            cs in prop::collection::vec((0..4usize, 0..3u8, 0..4usize), 0..7),
            a in 0..4usize,
            b in 0..4usize,
        ) {
            let mut l = LevelStore::new();
            for (x, r, y) in cs {
                match r {
                    0 => l.ge(NAMES[x], NAMES[y]),
                    1 => l.gt(NAMES[x], NAMES[y]),
                    _ => l.eq(NAMES[x], NAMES[y]),
                }
            }
            prop_assume!(l.is_satisfiable());
            let (p, q) = (NAMES[a], NAMES[b]);
            let probe = |x: &str, y: &str| l.clone().try_add(|l| l.gt(x, y));
            let forced = p == q || (!probe(p, q) && !probe(q, p));
            prop_assert_eq!(l.entails_eq(p, q), forced);
        }
    }
}
