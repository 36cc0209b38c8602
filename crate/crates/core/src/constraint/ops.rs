use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::fm::{self, Trace, DEFAULT_FM_CEILING};
use super::linexpr::{LinAtom, LinExpr, Norm, Rel};
use super::Constraint;
use crate::model::{Sort, Var};

/// Three-valued satisfiability answer over the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sat3 {
    Sat,
    Unsat,
    Unknown,
}

const MAX_NE_SPLITS: usize = 10;
const SEARCH_BUDGET: usize = 20_000;
const WINDOW: i64 = 64;
const OPEN_SAMPLES: i64 = 12;

fn bool_bounds(vars: &[Var]) -> Vec<LinAtom> {
    let mut out = Vec::new();
    for v in vars.iter().filter(|v| v.sort == Sort::Bool) {
        for n in [
            LinAtom::new(&LinExpr::constant(0), Rel::Le, &LinExpr::var(v)),
            LinAtom::new(&LinExpr::var(v), Rel::Le, &LinExpr::constant(1)),
        ] {
            if let Norm::Atom(a) = n {
                out.push(a);
            }
        }
    }
    out
}

pub fn is_satisfiable(c: &Constraint) -> Sat3 {
    sat_with(c, DEFAULT_FM_CEILING)
}

pub(crate) fn sat_with(c: &Constraint, ceiling: usize) -> Sat3 {
    if c.is_false() {
        return Sat3::Unsat;
    }
    if c.is_true() {
        return Sat3::Sat;
    }
    let vars = c.vars();
    let mut base: Vec<LinAtom> = c.atoms().iter().filter(|a| a.rel != Rel::Ne).cloned().collect();
    base.extend(bool_bounds(&vars));
    let nes: Vec<&LinAtom> = c.atoms().iter().filter(|a| a.rel == Rel::Ne).collect();

    let trace = fm::eliminate_all(base.clone(), &vars, ceiling);
    if trace.infeasible {
        return Sat3::Unsat;
    }
    let (model, exhaustive) = search(&trace, &vars, c);
    if model.is_some() {
        return Sat3::Sat;
    }
    if exhaustive {
        return Sat3::Unsat;
    }
    if nes.is_empty() {
        return Sat3::Unknown;
    }
    // split each ≠ into its two strict branches
    let splits = nes.len().min(MAX_NE_SPLITS);
    let mut unknown = false;
    for mask in 0u32..(1u32 << splits) {
        let mut rows = base.clone();
        let mut dead = false;
        for (i, ne) in nes.iter().take(splits).enumerate() {
            let l = ne.lhs();
            let k = LinExpr::constant(ne.rhs.clone());
            let n = if mask & (1 << i) == 0 {
                LinAtom::new(&l, Rel::Le, &k.sub(&LinExpr::constant(1)))
            } else {
                LinAtom::new(&k.add(&LinExpr::constant(1)), Rel::Le, &l)
            };
            match n {
                Norm::Atom(a) => rows.push(a),
                Norm::False => dead = true,
                Norm::True => {}
            }
        }
        if dead {
            continue;
        }
        let t = fm::eliminate_all(rows, &vars, ceiling);
        if t.infeasible {
            continue;
        }
        let (m, ex) = search(&t, &vars, c);
        if m.is_some() {
            return Sat3::Sat;
        }
        if !ex {
            unknown = true;
        }
    }
    if unknown {
        Sat3::Unknown
    } else {
        Sat3::Unsat
    }
}

fn candidates(lo: &Option<BigInt>, hi: &Option<BigInt>) -> (Vec<BigInt>, bool) {
    match (lo, hi) {
        (Some(l), Some(h)) => {
            let width = h - l;
            if width < BigInt::from(WINDOW) {
                let mut xs = Vec::new();
                let mut x = l.clone();
                while &x <= h {
                    xs.push(x.clone());
                    x += 1;
                }
                xs.sort_by_key(|x| x.abs());
                (xs, true)
            } else {
                let mut xs = Vec::new();
                for i in 0..OPEN_SAMPLES {
                    xs.push(l + i);
                    xs.push(h - i);
                }
                if l <= &BigInt::zero() && h >= &BigInt::zero() {
                    xs.insert(0, BigInt::zero());
                }
                (xs, false)
            }
        }
        (Some(l), None) => {
            let start = if l.is_negative() { BigInt::zero() } else { l.clone() };
            let mut xs: Vec<BigInt> = (0..OPEN_SAMPLES).map(|i| &start + i).collect();
            if start != *l {
                xs.extend((0..OPEN_SAMPLES).map(|i| l + i));
            }
            (xs, false)
        }
        (None, Some(h)) => {
            let start = if h.is_positive() { BigInt::zero() } else { h.clone() };
            let mut xs: Vec<BigInt> = (0..OPEN_SAMPLES).map(|i| &start - i).collect();
            if start != *h {
                xs.extend((0..OPEN_SAMPLES).map(|i| h - i));
            }
            (xs, false)
        }
        (None, None) => {
            let mut xs = vec![BigInt::zero()];
            for i in 1..OPEN_SAMPLES {
                xs.push(BigInt::from(i));
                xs.push(BigInt::from(-i));
            }
            (xs, false)
        }
    }
}

/// Backtracking reconstruction of an integer model from an elimination
/// trace. Returns a model of `full` if one was found, and whether the search
/// covered every integer point of the eliminated system.
fn search(trace: &Trace, vars: &[Var], full: &Constraint) -> (Option<HashMap<Var, BigInt>>, bool) {
    // assignment order: reverse elimination order, then variables that no
    // row ever constrained
    let mut steps: Vec<(Var, Option<usize>)> = trace
        .order
        .iter()
        .enumerate()
        .rev()
        .map(|(i, v)| (v.clone(), Some(i)))
        .collect();
    for v in vars {
        if !trace.order.contains(v) {
            steps.push((v.clone(), None));
        }
    }
    let mut model = HashMap::new();
    let mut budget = SEARCH_BUDGET;
    let mut exhaustive = true;
    let found = go(trace, &steps, 0, &mut model, full, &mut budget, &mut exhaustive);
    (if found { Some(model) } else { None }, exhaustive && budget > 0)
}

fn go(
    trace: &Trace,
    steps: &[(Var, Option<usize>)],
    at: usize,
    model: &mut HashMap<Var, BigInt>,
    full: &Constraint,
    budget: &mut usize,
    exhaustive: &mut bool,
) -> bool {
    if at == steps.len() {
        return full.holds(model) == Some(true);
    }
    if *budget == 0 {
        *exhaustive = false;
        return false;
    }
    *budget -= 1;
    let (v, sys) = &steps[at];
    let (lo, hi) = match sys {
        Some(i) => match fm::bounds(&trace.systems[*i], v, model) {
            Some(b) => b,
            None => return false,
        },
        None if v.sort == Sort::Bool => (Some(BigInt::zero()), Some(BigInt::one())),
        None => (None, None),
    };
    let (xs, complete) = candidates(&lo, &hi);
    if !complete {
        *exhaustive = false;
    }
    for x in xs {
        model.insert(v.clone(), x);
        if go(trace, steps, at + 1, model, full, budget, exhaustive) {
            return true;
        }
    }
    model.remove(v);
    false
}

/// `c ⊨ d` over the integers. A `false` answer may be a loss of precision.
pub fn entails(c: &Constraint, d: &Constraint) -> bool {
    if c.is_false() {
        return true;
    }
    if d.is_false() {
        return is_satisfiable(c) == Sat3::Unsat;
    }
    for a in d.atoms() {
        for part in a.split_eq() {
            let ok = part.negate().into_iter().all(|n| match n {
                Norm::False => true,
                Norm::True => is_satisfiable(c) == Sat3::Unsat,
                Norm::Atom(neg) => {
                    let mut q = c.clone();
                    q.push(Norm::Atom(neg));
                    is_satisfiable(&q) == Sat3::Unsat
                }
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

pub fn project(c: &Constraint, keep: &[Var]) -> Constraint {
    project_with(c, keep, DEFAULT_FM_CEILING)
}

/// Eliminates every variable of `c` outside `keep`. The result mentions only
/// `keep` and is entailed by `c`.
pub fn project_with(c: &Constraint, keep: &[Var], ceiling: usize) -> Constraint {
    if c.is_false() {
        return Constraint::bottom();
    }
    let elim: Vec<Var> = c.vars().into_iter().filter(|v| !keep.contains(v)).collect();
    if elim.is_empty() {
        return c.clone();
    }
    let mut rows: Vec<LinAtom> = c.atoms().iter().filter(|a| a.rel != Rel::Ne).cloned().collect();
    rows.extend(bool_bounds(&elim));
    let mut nes: Vec<LinAtom> = c.atoms().iter().filter(|a| a.rel == Rel::Ne).cloned().collect();
    let s = fm::simplify(rows);
    if s.infeasible {
        return Constraint::bottom();
    }
    let mut rows = s.rows;
    let mut remaining = elim.clone();
    while let Some(v) = fm::choose(&rows, &remaining) {
        remaining.retain(|w| w != &v);
        // exact substitution through a unit-coefficient equality also
        // carries disequalities across
        let unit = rows
            .iter()
            .filter(|r| r.rel == Rel::Eq && r.mentions(&v))
            .min_by_key(|r| r.coeffs[&v].abs())
            .filter(|r| r.coeffs[&v].abs().is_one())
            .cloned();
        let mut next = Vec::new();
        for ne in nes.drain(..) {
            if !ne.mentions(&v) {
                next.push(ne);
                continue;
            }
            if let Some(e) = &unit {
                let a = &e.coeffs[&v];
                // v = (rhs - rest)/a
                let mut rest = e.lhs();
                rest.coeffs.remove(&v);
                let val = LinExpr::constant(e.rhs.clone()).sub(&rest).scale(a);
                let map = HashMap::from([(v.clone(), val)]);
                match ne.substitute(&map) {
                    Norm::Atom(x) => next.push(x),
                    Norm::True => {}
                    Norm::False => return Constraint::bottom(),
                }
            }
        }
        nes = next;
        let step = fm::eliminate(&rows, &v, ceiling);
        if step.infeasible {
            return Constraint::bottom();
        }
        rows = step.rows;
    }
    // variables that occur only in dropped disequalities are simply gone
    nes.retain(|ne| ne.vars().all(|v| !elim.contains(v)));
    let mut out = Constraint::top();
    let mut used = vec![false; rows.len()];
    for i in 0..rows.len() {
        if used[i] {
            continue;
        }
        let r = &rows[i];
        if r.rel == Rel::Le {
            let neg: std::collections::BTreeMap<Var, BigInt> =
                r.coeffs.iter().map(|(v, a)| (v.clone(), -a)).collect();
            if let Some(j) = (i + 1..rows.len())
                .find(|&j| !used[j] && rows[j].rel == Rel::Le && rows[j].coeffs == neg && rows[j].rhs == -&r.rhs)
            {
                used[j] = true;
                out.push(LinAtom::from_parts(r.coeffs.clone(), Rel::Eq, r.rhs.clone()));
                continue;
            }
        }
        out.push(Norm::Atom(r.clone()));
    }
    for ne in nes {
        out.push(Norm::Atom(ne));
    }
    out.sorted()
}

/// Keeps the atoms of `c1` (equalities split into two inequalities) that are
/// entailed by `c2`. The result is entailed by both arguments.
pub fn widen(c1: &Constraint, c2: &Constraint) -> Constraint {
    if c1.is_false() {
        return if is_satisfiable(c2) == Sat3::Unsat {
            Constraint::bottom()
        } else {
            Constraint::top()
        };
    }
    let mut out = Constraint::top();
    for a in c1.atoms() {
        for part in a.split_eq() {
            let single = Constraint::from_atoms([part.clone()]);
            if entails(c2, &single) {
                out.push(Norm::Atom(part));
            }
        }
    }
    out
}
