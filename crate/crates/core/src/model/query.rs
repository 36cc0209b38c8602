//! Structural queries over conjunctions of atoms.

use indexmap::IndexMap;
use std::sync::Arc;

use super::term::{match_term, Subst};
use super::{Atom, ModeSignature, ModelError, Var};

/// `(bvars(g), adt-vars(g))`, each in first-occurrence order.
pub fn partition_vars(g: &[Atom]) -> (Vec<Var>, Vec<Var>) {
    let mut all = super::term::VarSet::default();
    for a in g {
        a.args.iter().for_each(|t| t.collect_vars(&mut all));
    }
    all.into_iter().partition(Var::is_basic)
}

pub fn basic_vars(g: &[Atom]) -> Vec<Var> {
    partition_vars(g).0
}

pub fn adt_vars(g: &[Atom]) -> Vec<Var> {
    partition_vars(g).1
}

/// Partition of the atom indices of `g` by transitive sharing of ADT
/// variables. Blocks are ordered by their first atom; indices ascend.
pub fn sharing_blocks(g: &[Atom]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..g.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let next = p[j];
            p[j] = r;
            j = next;
        }
        r
    }
    let mut owner: IndexMap<Var, usize> = IndexMap::new();
    for (i, a) in g.iter().enumerate() {
        for v in a.adt_vars() {
            match owner.get(&v) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
                None => {
                    owner.insert(v, i);
                }
            }
        }
    }
    let mut blocks: IndexMap<usize, Vec<usize>> = IndexMap::new();
    for i in 0..g.len() {
        let r = find(&mut parent, i);
        blocks.entry(r).or_default().push(i);
    }
    blocks.into_values().collect()
}

/// Atoms of `g` are connected through shared ADT variables.
pub fn is_connected(g: &[Atom]) -> bool {
    sharing_blocks(g).len() <= 1
}

/// One witness that `g1` atomwise subsumes `g2`: for every atom of `g1`
/// (left to right) the index of a distinct atom of `g2` that is an instance
/// of it, and the per-atom matching substitution.
pub fn atomwise_subsumes(g1: &[Atom], g2: &[Atom]) -> Option<Vec<(usize, Subst)>> {
    fn go(g1: &[Atom], g2: &[Atom], i: usize, used: &mut Vec<bool>, acc: &mut Vec<(usize, Subst)>) -> bool {
        if i == g1.len() {
            return true;
        }
        for j in 0..g2.len() {
            if used[j] || g1[i].pred != g2[j].pred || g1[i].args.len() != g2[j].args.len() {
                continue;
            }
            let mut s = Subst::default();
            if g1[i].args.iter().zip(&g2[j].args).all(|(p, t)| match_term(p, t, &mut s)) {
                used[j] = true;
                acc.push((j, s));
                if go(g1, g2, i + 1, used, acc) {
                    return true;
                }
                acc.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut used = vec![false; g2.len()];
    let mut acc = Vec::new();
    go(g1, g2, 0, &mut used, &mut acc).then_some(acc)
}

fn mode_of<'a>(modes: &'a IndexMap<Arc<str>, ModeSignature>, a: &Atom) -> Result<&'a ModeSignature, ModelError> {
    modes
        .get(&a.pred)
        .ok_or_else(|| ModelError::MissingMode(a.pred.to_string()))
}

/// Variables that are an input of some atom of `g` and an output of none.
pub fn source_vars(g: &[Atom], modes: &IndexMap<Arc<str>, ModeSignature>) -> Result<Vec<Var>, ModelError> {
    let mut ins = Vec::new();
    let mut outs = Vec::new();
    for a in g {
        let m = mode_of(modes, a)?;
        for v in m.input_vars(a) {
            if !ins.contains(&v) {
                ins.push(v);
            }
        }
        outs.extend(m.output_vars(a));
    }
    Ok(ins.into_iter().filter(|v| !outs.contains(v)).collect())
}

/// Indices of the atoms of `g` all of whose input variables are source variables.
pub fn source_atoms(g: &[Atom], modes: &IndexMap<Arc<str>, ModeSignature>) -> Result<Vec<usize>, ModelError> {
    let src = source_vars(g, modes)?;
    let mut out = Vec::new();
    for (i, a) in g.iter().enumerate() {
        let m = mode_of(modes, a)?;
        if m.input_vars(a).iter().all(|v| src.contains(v)) {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Sort, Term};

    fn l(n: &str) -> Term {
        Term::Var(Var::new(n, Sort::adt("list")))
    }
    fn i(n: &str) -> Term {
        Term::Var(Var::int(n))
    }
    fn at(p: &str, args: Vec<Term>) -> Atom {
        Atom::new(p, args)
    }

    fn clause1_body() -> Vec<Atom> {
        vec![
            at("append", vec![l("Xs"), l("Ys"), l("Zs")]),
            at("reverse", vec![l("Zs"), l("Rs")]),
            at("len", vec![l("Xs"), i("N0")]),
            at("len", vec![l("Ys"), i("N1")]),
            at("len", vec![l("Rs"), i("N2")]),
        ]
    }

    fn modes() -> IndexMap<Arc<str>, ModeSignature> {
        let mut m = IndexMap::new();
        m.insert(Arc::from("append"), ModeSignature::new(vec![0, 1], vec![2]));
        m.insert(Arc::from("reverse"), ModeSignature::new(vec![0], vec![1]));
        m.insert(Arc::from("len"), ModeSignature::new(vec![0], vec![1]));
        m
    }

    #[test]
    fn partition_of_len() {
        let (b, a) = partition_vars(&[at("len", vec![l("Xs"), i("N0")])]);
        assert_eq!(b, vec![Var::int("N0")]);
        assert_eq!(a, vec![Var::new("Xs", Sort::adt("list"))]);
        assert_eq!(partition_vars(&[]), (vec![], vec![]));
    }

    #[test]
    fn single_block_for_clause1() {
        assert_eq!(sharing_blocks(&clause1_body()), vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn integer_atoms_are_singletons() {
        let g = vec![at("p", vec![i("N")]), at("q", vec![i("M")])];
        assert_eq!(sharing_blocks(&g), vec![vec![0], vec![1]]);
    }

    #[test]
    fn source_atoms_of_clause1() {
        let s = source_atoms(&clause1_body(), &modes()).unwrap();
        assert_eq!(s, vec![0, 2, 3]);
    }

    #[test]
    fn missing_mode_is_an_error() {
        let g = vec![at("foo", vec![l("X")])];
        assert!(matches!(source_atoms(&g, &modes()), Err(ModelError::MissingMode(_))));
    }

    #[test]
    fn subsumption_basics() {
        let b = clause1_body();
        assert!(atomwise_subsumes(&b, &b).is_some());
        assert!(atomwise_subsumes(&[], &b).is_some());
        let g1 = vec![at("len", vec![l("Xs"), i("N")])];
        let g2 = vec![at("append", vec![l("A"), l("B"), l("C")])];
        assert!(atomwise_subsumes(&g1, &g2).is_none());
    }
}
