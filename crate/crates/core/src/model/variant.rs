//! Variant equality of clauses.
//!
//! [`canonical`] renames variables by first occurrence and keeps the body
//! order, which is enough to compare clauses produced by the same code path.
//! [`is_variant`] additionally allows body reordering and compares
//! constraints semantically (after projecting out constraint-only
//! variables).

use super::{Atom, Clause, Renaming, Term, Var};
use crate::constraint::{entails, project};

/// Alpha-renamed copy with variables `_0, _1, …` in first-occurrence order.
pub fn canonical(c: &Clause) -> Clause {
    let map: Renaming = c
        .vars()
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let w = Var::new(&format!("_{i}"), v.sort.clone());
            (v, w)
        })
        .collect();
    let mut out = c.rename(&map);
    out.constraint = out.constraint.sorted();
    out
}

#[derive(Clone, Default)]
struct Bij {
    fwd: Renaming,
    bwd: Renaming,
}

impl Bij {
    fn bind(&mut self, a: &Var, b: &Var) -> bool {
        if a.sort != b.sort {
            return false;
        }
        match (self.fwd.get(a), self.bwd.get(b)) {
            (Some(x), Some(y)) => x == b && y == a,
            (None, None) => {
                self.fwd.insert(a.clone(), b.clone());
                self.bwd.insert(b.clone(), a.clone());
                true
            }
            _ => false,
        }
    }

    fn term(&mut self, s: &Term, t: &Term) -> bool {
        match (s, t) {
            (Term::Var(a), Term::Var(b)) => self.bind(a, b),
            (Term::App { ctor: c1, args: a1, .. }, Term::App { ctor: c2, args: a2, .. }) => {
                c1 == c2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| self.term(x, y))
            }
            (Term::Int(m), Term::Int(n)) => m == n,
            (Term::Bool(m), Term::Bool(n)) => m == n,
            _ => false,
        }
    }

    fn atom(&mut self, a: &Atom, b: &Atom) -> bool {
        a.pred == b.pred && a.args.len() == b.args.len() && a.args.iter().zip(&b.args).all(|(x, y)| self.term(x, y))
    }
}

fn bodies(bij: Bij, xs: &[Atom], ys: &[Atom], used: &mut Vec<bool>, k: &mut dyn FnMut(&Bij) -> bool) -> bool {
    let Some((first, rest)) = xs.split_first() else {
        return k(&bij);
    };
    for j in 0..ys.len() {
        if used[j] {
            continue;
        }
        let mut b = bij.clone();
        if b.atom(first, &ys[j]) {
            used[j] = true;
            if bodies(b, rest, ys, used, k) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// `c1` and `c2` are equal up to variable renaming and body reordering, with
/// equivalent constraints.
pub fn is_variant(c1: &Clause, c2: &Clause) -> bool {
    if c1.body.len() != c2.body.len() || c1.is_goal() != c2.is_goal() {
        return false;
    }
    let mut bij = Bij::default();
    if let (Some(h1), Some(h2)) = (&c1.head, &c2.head) {
        if !bij.atom(h1, h2) {
            return false;
        }
    }
    let k1 = project(&c1.constraint, &c1.atom_vars());
    let k2 = project(&c2.constraint, &c2.atom_vars());
    let mut check = |b: &Bij| {
        let r = k1.rename(&b.fwd);
        entails(&r, &k2) && entails(&k2, &r)
    };
    let mut used = vec![false; c2.body.len()];
    bodies(bij, &c1.body, &c2.body, &mut used, &mut check)
}

/// Both sets have the same size and every clause of one has a distinct
/// variant in the other.
pub fn sets_variant_equal(a: &[Clause], b: &[Clause]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    fn go(a: &[Clause], b: &[Clause], used: &mut Vec<bool>) -> bool {
        let Some((first, rest)) = a.split_first() else {
            return true;
        };
        for j in 0..b.len() {
            if !used[j] && is_variant(first, &b[j]) {
                used[j] = true;
                if go(rest, b, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(a, b, &mut used)
}

/// Clauses of `a` that have no variant in `b` (diagnostics for tests).
pub fn missing_variants<'a>(a: &'a [Clause], b: &[Clause]) -> Vec<&'a Clause> {
    a.iter().filter(|c| !b.iter().any(|d| is_variant(c, d))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{Constraint, LinExpr, Rel};
    use crate::model::{ClauseId, Sort};

    fn i(n: &str) -> Term {
        Term::Var(Var::int(n))
    }
    fn l(n: &str) -> Term {
        Term::Var(Var::new(n, Sort::adt("list")))
    }

    fn len_rec(n1: &str, n0: &str, xs: &str) -> Clause {
        let mut k = Constraint::top();
        k.add(
            &LinExpr::var(&Var::int(n1)),
            Rel::Eq,
            &LinExpr::var(&Var::int(n0)).add(&LinExpr::constant(1)),
        );
        Clause::new(
            ClauseId(9),
            Some(Atom::new("len", vec![l(xs), i(n1)])),
            k,
            vec![Atom::new("len", vec![l(xs), i(n0)]), Atom::new("p", vec![i(n0)])],
        )
    }

    #[test]
    fn renaming_is_a_variant() {
        let a = len_rec("N1", "N0", "Xs");
        let b = len_rec("M", "K", "Ys");
        assert!(is_variant(&a, &b));
        assert_eq!(canonical(&a), canonical(&b));
    }

    #[test]
    fn reordered_body_is_a_variant() {
        let a = len_rec("N1", "N0", "Xs");
        let mut b = a.clone();
        b.body.reverse();
        assert!(is_variant(&a, &b));
        assert_ne!(canonical(&a), canonical(&b));
    }

    #[test]
    fn swapped_roles_are_not_variants() {
        let a = len_rec("N1", "N0", "Xs");
        let b = len_rec("N0", "N1", "Xs");
        let mut b2 = b.clone();
        b2.head = a.head.clone();
        assert!(!is_variant(&a, &b2));
    }

    #[test]
    fn set_comparison_counts() {
        let a = len_rec("N1", "N0", "Xs");
        assert!(sets_variant_equal(&[a.clone()], &[a.clone()]));
        assert!(!sets_variant_equal(&[a.clone(), a.clone()], &[a]));
    }
}
