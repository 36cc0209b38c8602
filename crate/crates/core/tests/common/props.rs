//! Constraint-engine properties with a brute-force oracle: enumeration of
//! the integer box [-5, 5]³.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use adtfree::constraint::{entails, is_satisfiable, project, widen, Constraint, LinExpr, Rel, Sat3};
use adtfree::Var;

const R: i64 = 5;

/// `Σ a·v  op  k` with op in `=, ≠, ≤, <, ≥, >`.
pub type Row = ([i64; 3], u8, i64);

fn vars() -> [Var; 3] {
    [Var::int("x"), Var::int("y"), Var::int("z")]
}

pub fn row() -> impl Strategy<Value = Row> {
    (prop::array::uniform3(-3i64..=3), 0u8..6, -6i64..=6)
}

pub fn rows(max: usize) -> impl Strategy<Value = Vec<Row>> {
    prop::collection::vec(row(), 0..=max)
}

fn build(rs: &[Row]) -> Constraint {
    let vs = vars();
    let mut c = Constraint::top();
    for (a, op, k) in rs {
        let mut lhs = LinExpr::zero();
        for (v, &ai) in vs.iter().zip(a) {
            lhs = lhs.add(&LinExpr::term(ai, v));
        }
        let k = LinExpr::constant(*k);
        match op {
            0 => c.add(&lhs, Rel::Eq, &k),
            1 => c.add(&lhs, Rel::Ne, &k),
            2 => c.add(&lhs, Rel::Le, &k),
            3 => c.add(&lhs, Rel::Le, &k.sub(&LinExpr::constant(1))),
            4 => c.add(&k, Rel::Le, &lhs),
            _ => c.add(&k.add(&LinExpr::constant(1)), Rel::Le, &lhs),
        }
    }
    c
}

fn raw_holds(rs: &[Row], p: [i64; 3]) -> bool {
    rs.iter().all(|(a, op, k)| {
        let s: i64 = a.iter().zip(p).map(|(x, y)| x * y).sum();
        match op {
            0 => s == *k,
            1 => s != *k,
            2 => s <= *k,
            3 => s < *k,
            4 => s >= *k,
            _ => s > *k,
        }
    })
}

/// Evaluates a library constraint directly from its atoms; unmentioned
/// variables are not needed.
fn eval(c: &Constraint, p: [i64; 3]) -> bool {
    if c.is_false() {
        return false;
    }
    let vs = vars();
    let val: HashMap<&Var, i64> = vs.iter().zip(p).collect();
    c.atoms().iter().all(|a| {
        let s: BigInt = a.coeffs.iter().map(|(v, k)| k * BigInt::from(val[v])).sum();
        let s = s.to_i64().unwrap();
        let rhs = a.rhs.to_i64().unwrap();
        match a.rel {
            Rel::Le => s <= rhs,
            Rel::Eq => s == rhs,
            Rel::Ne => s != rhs,
        }
    })
}

fn grid() -> impl Iterator<Item = [i64; 3]> {
    (-R..=R).flat_map(|x| (-R..=R).flat_map(move |y| (-R..=R).map(move |z| [x, y, z])))
}

fn boxed(rs: &[Row]) -> Vec<Row> {
    let mut out = rs.to_vec();
    for i in 0..3 {
        let mut a = [0; 3];
        a[i] = 1;
        out.push((a, 4, -R));
        out.push((a, 2, R));
    }
    out
}

pub fn widening_is_entailed_by_both_arguments(a: &[Row], b: &[Row]) -> Result<(), TestCaseError> {
    let (c1, c2) = (build(a), build(b));
    let w = widen(&c1, &c2);
    for p in grid() {
        if raw_holds(a, p) || raw_holds(b, p) {
            prop_assert!(eval(&w, p), "{w} fails at {p:?}");
        }
    }
    Ok(())
}

pub fn projection_holds_on_every_model(a: &[Row], keep: [bool; 3]) -> Result<(), TestCaseError> {
    let c = build(a);
    let kept: Vec<Var> = vars().into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect();
    let p = project(&c, &kept);
    for v in p.vars() {
        prop_assert!(kept.contains(&v), "{v} survives projection");
    }
    for pt in grid() {
        if raw_holds(a, pt) {
            prop_assert!(eval(&p, pt), "{p} fails at {pt:?}");
        }
    }
    Ok(())
}

pub fn entailment_is_reflexive(a: &[Row]) -> Result<(), TestCaseError> {
    let c = build(a);
    prop_assert!(entails(&c, &c), "{c} does not entail itself");
    Ok(())
}

/// `b` and `c` weaken `a` by dropping rows; `other` is unrelated and
/// usually breaks the chain.
pub fn entailment_is_transitive(a: &[Row], drop1: &[bool], drop2: &[bool], other: &[Row]) -> Result<(), TestCaseError> {
    let b: Vec<Row> = a.iter().zip(drop1).filter(|(_, d)| !**d).map(|(r, _)| *r).collect();
    let c: Vec<Row> = b.iter().zip(drop2).filter(|(_, d)| !**d).map(|(r, _)| *r).chain(other.iter().copied()).collect();
    let (ca, cb, cc) = (build(a), build(&b), build(&c));
    prop_assert!(entails(&ca, &cb));
    if entails(&ca, &cb) && entails(&cb, &cc) {
        prop_assert!(entails(&ca, &cc));
    }
    Ok(())
}

pub fn entailment_is_sound(a: &[Row], b: &[Row]) -> Result<(), TestCaseError> {
    let (ca, cb) = (build(a), build(b));
    if entails(&ca, &cb) {
        for p in grid().filter(|p| raw_holds(a, *p)) {
            prop_assert!(raw_holds(b, p), "{ca} entails {cb} but not at {p:?}");
        }
    }
    Ok(())
}

/// Elimination plus search decides bounded systems exactly.
pub fn satisfiability_matches_grid_enumeration(a: &[Row]) -> Result<(), TestCaseError> {
    let rs = boxed(a);
    let expected = grid().any(|p| raw_holds(&rs, p));
    let got = is_satisfiable(&build(&rs));
    prop_assert_eq!(got, if expected { Sat3::Sat } else { Sat3::Unsat });
    Ok(())
}
