//! Unfolding of freshly introduced definitions.
//!
//! Phase one unfolds a set of source atoms chosen so that every source
//! variable of the body gets instantiated; the first of them is unfolded at
//! the same level as the definition. Phase two keeps unfolding head-instance
//! atoms that are either original or of a descending predicate.

use rustc_hash::FxHashMap;
use std::sync::Arc;

use super::{Config, RunError};
use crate::constraint::Constraint;
use crate::model::query::{source_atoms, source_vars};
use crate::model::{Atom, Clause};
use crate::rules::{Definition, Transformer};

pub fn unfold_definitions(t: &mut Transformer, defs: &[Definition], cfg: &Config) -> Result<Vec<Clause>, RunError> {
    let mut budget = cfg.unfold_budget;
    let mut out = Vec::new();
    for def in defs {
        let d = def.clause.clone();
        let first = phase_one_atoms(t, &d)?;
        let mut marks = vec![false; d.body.len()];
        first.iter().for_each(|&i| marks[i] = true);
        let mut staged = Vec::new();
        phase_one(t, d, marks, first.first().copied(), &mut budget, &mut staged)?;
        let mut memo = HeadMemo::default();
        for c in staged {
            let marks = vec![true; c.body.len()];
            phase_two(t, c, marks, &mut budget, &mut memo, &mut out)?;
        }
    }
    Ok(out)
}

/// The atoms unfolded in phase one; the first is the one whose predicate is
/// placed at the definition's level.
fn phase_one_atoms(t: &mut Transformer, d: &Clause) -> Result<Vec<usize>, RunError> {
    let src = source_atoms(&d.body, t.modes())?;
    if src.is_empty() {
        return Ok(Vec::new());
    }
    let newp: Arc<str> = Arc::from(d.head_pred().unwrap());
    let lead = src
        .iter()
        .copied()
        .find(|&i| {
            let q = d.body[i].pred.clone();
            t.levels.try_add(|l| l.eq(&newp, &q))
        })
        .unwrap_or(src[0]);
    let svars = source_vars(&d.body, t.modes())?;
    let mut covered = t.mode(&d.body[lead].pred)?.input_vars(&d.body[lead]);
    let mut chosen = vec![lead];
    for &i in &src {
        if i == lead {
            continue;
        }
        let ins = t.mode(&d.body[i].pred)?.input_vars(&d.body[i]);
        if ins.iter().any(|v| svars.contains(v) && !covered.contains(v)) {
            covered.extend(ins);
            chosen.push(i);
        }
    }
    Ok(chosen)
}

fn phase_one(
    t: &mut Transformer,
    c: Clause,
    marks: Vec<bool>,
    lead: Option<usize>,
    budget: &mut usize,
    out: &mut Vec<Clause>,
) -> Result<(), RunError> {
    let pos = lead.or_else(|| marks.iter().position(|&m| m));
    match pos {
        Some(pos) if *budget > 0 => {
            *budget -= 1;
            for u in t.unfold(&c, pos)? {
                let m = shift(&marks, pos, u.derived.len(), false);
                phase_one(t, u.clause, m, None, budget, out)?;
            }
        }
        _ => out.push(c),
    }
    Ok(())
}

/// Head-instance answers for atoms under one clause constraint. Unfolding
/// leaves most atoms of a long body untouched, and the answer depends only
/// on the atom and the constraint.
#[derive(Default)]
struct HeadMemo {
    constraint: Constraint,
    known: FxHashMap<Atom, bool>,
}

impl HeadMemo {
    fn check(&mut self, t: &mut Transformer, c: &Clause, i: usize) -> Result<bool, RunError> {
        if self.constraint != c.constraint {
            self.constraint = c.constraint.clone();
            self.known.clear();
        }
        if let Some(&b) = self.known.get(&c.body[i]) {
            return Ok(b);
        }
        let b = t.is_head_instance(c, i)?;
        self.known.insert(c.body[i].clone(), b);
        Ok(b)
    }
}

fn phase_two(
    t: &mut Transformer,
    c: Clause,
    marks: Vec<bool>,
    budget: &mut usize,
    memo: &mut HeadMemo,
    out: &mut Vec<Clause>,
) -> Result<(), RunError> {
    if *budget == 0 {
        out.push(c);
        return Ok(());
    }
    let mut pick = None;
    for (i, (a, &marked)) in c.body.iter().zip(&marks).enumerate() {
        if (marked || t.is_descending(&a.pred)) && memo.check(t, &c, i)? {
            pick = Some(i);
            break;
        }
    }
    let Some(pos) = pick else {
        out.push(c);
        return Ok(());
    };
    *budget -= 1;
    for u in t.unfold(&c, pos)? {
        let m = shift(&marks, pos, u.derived.len(), false);
        phase_two(t, u.clause, m, budget, memo, out)?;
    }
    Ok(())
}

/// Marks after replacing position `pos` by `n` atoms marked `fill`.
fn shift(marks: &[bool], pos: usize, n: usize, fill: bool) -> Vec<bool> {
    let mut m = marks[..pos].to_vec();
    m.extend(std::iter::repeat_n(fill, n));
    m.extend_from_slice(&marks[pos + 1..]);
    m
}
