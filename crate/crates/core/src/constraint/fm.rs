//! Fourier–Motzkin elimination over `≤`/`=` rows with integer tightening.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::linexpr::{LinAtom, Norm, Rel};
use crate::model::Var;

/// Per-elimination cap on produced rows; above it the eliminated variable's
/// rows are dropped, which weakens (but never unsoundly strengthens) the result.
pub const DEFAULT_FM_CEILING: usize = 512;

#[derive(Debug, Clone)]
pub(crate) struct Step {
    pub rows: Vec<LinAtom>,
    pub infeasible: bool,
    pub exact: bool,
}

fn combine(r1: &LinAtom, m1: &BigInt, r2: &LinAtom, m2: &BigInt, rel: Rel) -> Norm {
    let mut coeffs: BTreeMap<Var, BigInt> = BTreeMap::new();
    for (v, a) in &r1.coeffs {
        *coeffs.entry(v.clone()).or_default() += a * m1;
    }
    for (v, a) in &r2.coeffs {
        *coeffs.entry(v.clone()).or_default() += a * m2;
    }
    LinAtom::from_parts(coeffs, rel, &r1.rhs * m1 + &r2.rhs * m2)
}

/// Deduplicates, keeps the tightest of parallel bounds and detects
/// contradictory opposite bounds.
pub(crate) fn simplify(rows: Vec<LinAtom>) -> Step {
    let mut le: BTreeMap<BTreeMap<Var, BigInt>, BigInt> = BTreeMap::new();
    let mut eqs: Vec<LinAtom> = Vec::new();
    for r in rows {
        match r.rel {
            Rel::Le => {
                let e = le.entry(r.coeffs.clone()).or_insert_with(|| r.rhs.clone());
                if r.rhs < *e {
                    *e = r.rhs;
                }
            }
            Rel::Eq => {
                if let Some(other) = eqs.iter().find(|e| e.coeffs == r.coeffs) {
                    if other.rhs != r.rhs {
                        return infeasible();
                    }
                } else {
                    eqs.push(r);
                }
            }
            Rel::Ne => {}
        }
    }
    for (c, k) in &le {
        let neg: BTreeMap<Var, BigInt> = c.iter().map(|(v, a)| (v.clone(), -a)).collect();
        if let Some(k2) = le.get(&neg) {
            // c·x ≤ k  and  c·x ≥ -k2
            if -k2 > *k {
                return infeasible();
            }
        }
        for e in &eqs {
            if &e.coeffs == c && e.rhs > *k {
                return infeasible();
            }
            if e.coeffs == neg && -&e.rhs > *k {
                return infeasible();
            }
        }
    }
    let mut out = eqs;
    out.extend(le.into_iter().map(|(coeffs, rhs)| LinAtom {
        coeffs,
        rel: Rel::Le,
        rhs,
    }));
    Step {
        rows: out,
        infeasible: false,
        exact: true,
    }
}

fn infeasible() -> Step {
    Step {
        rows: Vec::new(),
        infeasible: true,
        exact: true,
    }
}

fn push(out: &mut Vec<LinAtom>, n: Norm) -> bool {
    match n {
        Norm::True => true,
        Norm::False => false,
        Norm::Atom(a) => {
            out.push(a);
            true
        }
    }
}

/// Eliminates `v` from `rows` (which must contain only `≤`/`=` atoms).
pub(crate) fn eliminate(rows: &[LinAtom], v: &Var, ceiling: usize) -> Step {
    let pivot = rows
        .iter()
        .filter(|r| r.rel == Rel::Eq && r.mentions(v))
        .min_by_key(|r| r.coeffs[v].abs());
    let mut out = Vec::new();
    let mut exact = true;
    if let Some(e) = pivot {
        let a = &e.coeffs[v];
        let sa = if a.is_negative() { -BigInt::one() } else { BigInt::one() };
        let abs_a = a.abs();
        for r in rows {
            if std::ptr::eq(r, e) {
                continue;
            }
            match r.coeffs.get(v) {
                None => out.push(r.clone()),
                Some(b) => {
                    let n = combine(r, &abs_a, e, &(-(&sa * b)), r.rel);
                    if !push(&mut out, n) {
                        return infeasible();
                    }
                }
            }
        }
    } else {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for r in rows {
            match r.coeffs.get(v) {
                None => out.push(r.clone()),
                Some(b) if b.is_positive() => pos.push(r),
                Some(_) => neg.push(r),
            }
        }
        if pos.len() * neg.len() > ceiling {
            exact = false;
        } else {
            for p in &pos {
                for n in &neg {
                    let bp = &p.coeffs[v];
                    let bn = &n.coeffs[v];
                    if !push(&mut out, combine(p, &(-bn), n, bp, Rel::Le)) {
                        return infeasible();
                    }
                }
            }
        }
    }
    let mut s = simplify(out);
    s.exact &= exact;
    s
}

/// Picks the next variable to eliminate among `candidates`: one with a unit
/// coefficient in an equality if possible, otherwise the cheapest FM step.
pub(crate) fn choose(rows: &[LinAtom], candidates: &[Var]) -> Option<Var> {
    let present: Vec<&Var> = candidates
        .iter()
        .filter(|v| rows.iter().any(|r| r.mentions(v)))
        .collect();
    if let Some(v) = present.iter().find(|v| {
        rows.iter()
            .any(|r| r.rel == Rel::Eq && r.coeffs.get(**v).is_some_and(|a| a.abs().is_one()))
    }) {
        return Some((*v).clone());
    }
    if let Some(v) = present
        .iter()
        .find(|v| rows.iter().any(|r| r.rel == Rel::Eq && r.mentions(v)))
    {
        return Some((*v).clone());
    }
    present
        .into_iter()
        .min_by_key(|v| {
            let (mut p, mut n) = (0usize, 0usize);
            for r in rows {
                if let Some(a) = r.coeffs.get(*v) {
                    if a.is_positive() {
                        p += 1
                    } else {
                        n += 1
                    }
                }
            }
            p * n
        })
        .cloned()
}

/// Result of eliminating a set of variables, keeping every intermediate
/// system so that integer witnesses can be reconstructed backwards.
#[derive(Debug, Clone)]
pub(crate) struct Trace {
    pub order: Vec<Var>,
    /// `systems[i]` is the system before eliminating `order[i]`;
    /// the last entry is the final system.
    pub systems: Vec<Vec<LinAtom>>,
    pub infeasible: bool,
    pub exact: bool,
}

pub(crate) fn eliminate_all(rows: Vec<LinAtom>, vars: &[Var], ceiling: usize) -> Trace {
    let first = simplify(rows);
    let mut trace = Trace {
        order: Vec::new(),
        systems: vec![first.rows.clone()],
        infeasible: first.infeasible,
        exact: true,
    };
    if trace.infeasible {
        return trace;
    }
    let mut cur = first.rows;
    let mut remaining: Vec<Var> = vars.to_vec();
    while let Some(v) = choose(&cur, &remaining) {
        remaining.retain(|w| w != &v);
        let s = eliminate(&cur, &v, ceiling);
        trace.order.push(v);
        trace.exact &= s.exact;
        if s.infeasible {
            trace.infeasible = true;
            trace.systems.push(Vec::new());
            return trace;
        }
        cur = s.rows;
        trace.systems.push(cur.clone());
    }
    trace
}

/// Bounds on `v` implied by rows whose other variables are all assigned.
pub(crate) fn bounds(rows: &[LinAtom], v: &Var, model: &HashMap<Var, BigInt>) -> Option<(Option<BigInt>, Option<BigInt>)> {
    use num_integer::Integer;
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    for r in rows {
        let Some(a) = r.coeffs.get(v) else { continue };
        let mut rest = BigInt::zero();
        let mut ok = true;
        for (w, b) in &r.coeffs {
            if w == v {
                continue;
            }
            match model.get(w) {
                Some(x) => rest += b * x,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let k = &r.rhs - rest;
        match r.rel {
            Rel::Eq => {
                if !(&k % a).is_zero() {
                    return None;
                }
                let x = &k / a;
                lo = Some(lo.map_or(x.clone(), |l| l.max(x.clone())));
                hi = Some(hi.map_or(x.clone(), |h| h.min(x)));
            }
            Rel::Le => {
                if a.is_positive() {
                    let x = k.div_floor(a);
                    hi = Some(hi.map_or(x.clone(), |h| h.min(x)));
                } else {
                    let x = k.div_ceil(a);
                    lo = Some(lo.map_or(x.clone(), |l| l.max(x)));
                }
            }
            Rel::Ne => {}
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    Some((lo, hi))
}
