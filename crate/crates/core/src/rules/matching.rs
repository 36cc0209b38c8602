//! Matching of conjunctions against definition bodies.

use std::collections::HashSet;

use crate::model::{match_term, Atom, Subst, Term, Var};

/// Subterm ordering on tuples: every `u` is a (non-strict) subterm of some
/// `t`, and at least one is strict.
pub(crate) fn precedes(u: &[Term], t: &[Term]) -> bool {
    u.iter().all(|x| t.iter().any(|y| x.is_subterm_of(y)))
        && u.iter().any(|x| t.iter().any(|y| x.is_strict_subterm_of(y)))
}

pub(crate) fn match_atom(p: &Atom, t: &Atom, s: &mut Subst) -> bool {
    p.pred == t.pred && p.args.len() == t.args.len() && p.args.iter().zip(&t.args).all(|(a, b)| match_term(a, b, s))
}

/// Basic variables are mapped to pairwise distinct variables.
pub(crate) fn basic_injective(s: &Subst) -> bool {
    let mut seen = HashSet::new();
    s.iter()
        .filter(|(v, _)| v.is_basic())
        .all(|(_, t)| matches!(t, Term::Var(w) if seen.insert(w.clone())))
}

/// `target` is `pattern·θ` up to reordering. Returns θ and, for each
/// pattern atom, the index of its image in `target`.
pub(crate) fn instance_of(pattern: &[Atom], target: &[Atom]) -> Option<(Subst, Vec<usize>)> {
    if pattern.len() != target.len() {
        return None;
    }
    let mut ps: Vec<(&str, usize)> = pattern.iter().map(|a| (&*a.pred, a.args.len())).collect();
    let mut ts: Vec<(&str, usize)> = target.iter().map(|a| (&*a.pred, a.args.len())).collect();
    ps.sort_unstable();
    ts.sort_unstable();
    if ps != ts {
        return None;
    }
    fn go(p: &[Atom], t: &[Atom], i: usize, s: Subst, used: &mut Vec<usize>) -> Option<Subst> {
        if i == p.len() {
            return Some(s);
        }
        for j in 0..t.len() {
            if used.contains(&j) {
                continue;
            }
            let mut s2 = s.clone();
            if match_atom(&p[i], &t[j], &mut s2) && basic_injective(&s2) {
                used.push(j);
                if let Some(r) = go(p, t, i + 1, s2, used) {
                    return Some(r);
                }
                used.pop();
            }
        }
        None
    }
    let mut used = Vec::new();
    go(pattern, target, 0, Subst::default(), &mut used).map(|s| (s, used))
}

/// A partial match of `pattern` into `target`: `pos[i]` is the target index
/// of pattern atom `i`, or `None` if that atom is left unmatched.
#[derive(Debug, Clone)]
pub(crate) struct Partial {
    pub subst: Subst,
    pub pos: Vec<Option<usize>>,
}

impl Partial {
    pub fn matched(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.pos.iter().flatten().copied().collect();
        m.sort();
        m
    }
}

/// Every partial match with at least one matched atom, up to `limit`.
pub(crate) fn partial_matches(pattern: &[Atom], target: &[Atom], limit: usize) -> Vec<Partial> {
    fn go(p: &[Atom], t: &[Atom], i: usize, s: Subst, pos: &mut Vec<Option<usize>>, out: &mut Vec<Partial>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if i == p.len() {
            if pos.iter().any(Option::is_some) {
                out.push(Partial {
                    subst: s,
                    pos: pos.clone(),
                });
            }
            return;
        }
        for j in 0..t.len() {
            if pos.contains(&Some(j)) {
                continue;
            }
            let mut s2 = s.clone();
            if match_atom(&p[i], &t[j], &mut s2) && basic_injective(&s2) {
                pos.push(Some(j));
                go(p, t, i + 1, s2, pos, out, limit);
                pos.pop();
            }
        }
        pos.push(None);
        go(p, t, i + 1, s, pos, out, limit);
        pos.pop();
    }
    let mut out = Vec::new();
    go(pattern, target, 0, Subst::default(), &mut Vec::new(), &mut out, limit);
    out
}

/// Positions of `atoms` in `body` (distinct, first free occurrence).
pub(crate) fn locate(body: &[Atom], atoms: &[Atom]) -> Option<Vec<usize>> {
    let mut used: Vec<usize> = Vec::new();
    for a in atoms {
        let j = (0..body.len()).find(|j| !used.contains(j) && &body[*j] == a)?;
        used.push(j);
    }
    Some(used)
}

/// The image of `v` under `s`, as a term.
pub(crate) fn image(v: &Var, s: &Subst) -> Term {
    Term::Var(v.clone()).apply(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sort;

    fn l(n: &str) -> Term {
        Term::Var(Var::new(n, Sort::adt("list")))
    }
    fn i(n: &str) -> Term {
        Term::Var(Var::int(n))
    }
    fn cons(h: Term, t: Term) -> Term {
        Term::app("cons", Sort::adt("list"), vec![h, t])
    }

    #[test]
    fn subterm_ordering() {
        assert!(precedes(&[l("Xs"), i("Y")], &[cons(i("X"), l("Xs")), i("Y")]));
        assert!(!precedes(&[l("Xs")], &[l("Xs")]));
        assert!(!precedes(&[l("Ys")], &[cons(i("X"), l("Xs"))]));
    }

    #[test]
    fn instance_with_reordering() {
        let p = vec![Atom::new("len", vec![l("A"), i("N")]), Atom::new("rev", vec![l("A"), l("B")])];
        let t = vec![Atom::new("rev", vec![l("Xs"), l("Ys")]), Atom::new("len", vec![l("Xs"), i("M")])];
        let (s, pos) = instance_of(&p, &t).unwrap();
        assert_eq!(pos, vec![1, 0]);
        assert_eq!(image(&Var::int("N"), &s), i("M"));
    }

    #[test]
    fn basic_variables_must_stay_distinct() {
        let p = vec![Atom::new("len", vec![l("A"), i("N")]), Atom::new("len", vec![l("B"), i("M")])];
        let t = vec![Atom::new("len", vec![l("X"), i("K")]), Atom::new("len", vec![l("Y"), i("K")])];
        assert!(instance_of(&p, &t).is_none());
    }

    #[test]
    fn partial_matches_enumerate_subsets() {
        let p = vec![Atom::new("len", vec![l("A"), i("N")])];
        let t = vec![Atom::new("len", vec![l("X"), i("K")]), Atom::new("len", vec![l("Y"), i("M")])];
        assert_eq!(partial_matches(&p, &t, 100).len(), 2);
    }
}
