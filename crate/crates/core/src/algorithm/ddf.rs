//! Definition–introduction and folding: turns every clause of the work set
//! into a clause whose body atoms are all basic-typed.

use super::{Config, RunError};
use crate::constraint::{entails, project_with, widen, Constraint};
use crate::model::query::{basic_vars, is_connected, sharing_blocks, source_vars};
use crate::model::{Atom, Clause, Renaming, Subst, Term, Var};
use crate::rules::matching::{image, instance_of, locate, partial_matches};
use crate::rules::{DefKind, Definition, RuleError, Transformer};

/// Processes `in_cls`; returns the definitions introduced and the folded
/// clauses.
pub fn diff_define_fold(
    t: &mut Transformer,
    in_cls: Vec<Clause>,
    cfg: &Config,
) -> Result<(Vec<Definition>, Vec<Clause>), RunError> {
    let first_new = t.defs.len();
    let mut out = Vec::with_capacity(in_cls.len());
    for c in in_cls {
        out.push(process(t, c, cfg)?);
    }
    Ok((t.defs[first_new..].to_vec(), out))
}

fn process(t: &mut Transformer, mut c: Clause, cfg: &Config) -> Result<Clause, RunError> {
    while !t.is_done(&c) {
        let blocks = sharing_blocks(&c.body);
        let block = blocks
            .into_iter()
            .find(|b| b.iter().any(|&i| t.needs_removal(&c.body[i])))
            .expect("a clause that is not done has an atom to remove");
        let mut gen_candidate = None;
        if let Some(r) = try_fold(t, &c, &block, &mut gen_candidate)? {
            c = r;
            continue;
        }
        if let Some((def, theta, at)) = gen_candidate {
            if let Some(r) = generalize(t, &c, &def, &theta, &at)? {
                c = r;
                continue;
            }
        }
        if !cfg.no_diff {
            if let Some(r) = diff_introduce(t, &c, &block, cfg)? {
                c = r;
                continue;
            }
        }
        c = project(t, &c, &block)?;
    }
    Ok(c)
}

/// Fatal errors propagate; everything else means "rule not applicable".
fn soft<T>(r: Result<T, RuleError>) -> Result<Option<T>, RunError> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(RuleError::Model(e)) => Err(e.into()),
        Err(_) => Ok(None),
    }
}

type GenCandidate = Option<(Definition, Subst, Vec<usize>)>;

fn try_fold(t: &mut Transformer, c: &Clause, block: &[usize], gen: &mut GenCandidate) -> Result<Option<Clause>, RunError> {
    let atoms: Vec<Atom> = block.iter().map(|&i| c.body[i].clone()).collect();
    for def in t.defs.clone().into_iter().rev() {
        let Some((theta, pos)) = instance_of(&def.clause.body, &atoms) else {
            continue;
        };
        let at: Vec<usize> = pos.iter().map(|&k| block[k]).collect();
        match t.fold(c, def.clause.id, &at, &theta) {
            Ok(r) => return Ok(Some(r)),
            Err(RuleError::NotEntailed(..)) if gen.is_none() => *gen = Some((def, theta, at)),
            Err(RuleError::Model(e)) => return Err(e.into()),
            Err(_) => {}
        }
    }
    Ok(None)
}

/// Introduces `genp(U) ← widen(d, c'), B'` for the definition `D: newp(U) ←
/// d, B'` whose body matches but whose constraint is not entailed, and
/// folds with it.
fn generalize(t: &mut Transformer, c: &Clause, def: &Definition, theta: &Subst, at: &[usize]) -> Result<Option<Clause>, RunError> {
    let d = &def.clause;
    let Some(gen) = widened(t, c, d, theta, at) else {
        return Ok(None);
    };
    let head: Vec<Var> = d.head.as_ref().unwrap().args.iter().filter_map(|a| a.as_var().cloned()).collect();
    let inputs = t.mode(def.pred())?.inputs.clone();
    let g = t.define(DefKind::Generalization, None, head, inputs, gen, d.body.clone())?;
    soft(t.fold(c, g.clause.id, at, theta))
}

/// `widen(d, c')` with `c' = π(c, bvars(B))` renamed back into the
/// definition's variables.
fn widened(t: &Transformer, c: &Clause, d: &Clause, theta: &Subst, at: &[usize]) -> Option<Constraint> {
    let block: Vec<Atom> = at.iter().map(|&i| c.body[i].clone()).collect();
    let keep = basic_vars(&block);
    let proj = project_with(&c.constraint, &keep, t.ceiling);
    let mut inv = Renaming::default();
    for (v, img) in theta {
        if let (true, Term::Var(w)) = (v.is_basic(), img) {
            inv.insert(w.clone(), v.clone());
        }
    }
    if keep.iter().any(|v| !inv.contains_key(v)) {
        return None;
    }
    Some(widen(&d.constraint, &proj.rename(&inv)))
}

fn project(t: &mut Transformer, c: &Clause, block: &[usize]) -> Result<Clause, RunError> {
    let atoms: Vec<Atom> = block.iter().map(|&i| c.body[i].clone()).collect();
    let u = dedup(basic_vars(&atoms));
    let mut z: Vec<Var> = Vec::new();
    for a in &atoms {
        for v in t.mode(&a.pred)?.input_vars(a) {
            if v.is_basic() && !z.contains(&v) {
                z.push(v);
            }
        }
    }
    let inputs: Vec<usize> = (0..u.len()).filter(|&i| z.contains(&u[i])).collect();
    let constraint = project_with(&c.constraint, &z, t.ceiling);
    let def = t.define(DefKind::Projection, None, u, inputs, constraint, atoms)?;
    Ok(t.fold_with(c, def.clause.id, block, &Subst::default(), false)?)
}

fn dedup(vs: Vec<Var>) -> Vec<Var> {
    let mut out: Vec<Var> = Vec::with_capacity(vs.len());
    for v in vs {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn vars_of(g: &[Atom]) -> Vec<Var> {
    dedup(g.iter().flat_map(Atom::vars).collect())
}

/// A way of splitting a block into a part `M` matched by a definition and
/// a rest `F`, with `R` the unmatched definition atoms.
struct Split {
    def: Definition,
    theta: Subst,
    m: Vec<usize>,
    f: Vec<usize>,
    r: Vec<Atom>,
}

fn diff_introduce(t: &mut Transformer, c: &Clause, block: &[usize], cfg: &Config) -> Result<Option<Clause>, RunError> {
    let atoms: Vec<Atom> = block.iter().map(|&i| c.body[i].clone()).collect();
    let mut splits: Vec<Split> = Vec::new();
    for def in t.defs.clone().into_iter().rev() {
        for p in partial_matches(&def.clause.body, &atoms, cfg.match_limit) {
            let m: Vec<usize> = p.matched().iter().map(|&k| block[k]).collect();
            if m.len() == block.len() {
                continue;
            }
            let m_atoms: Vec<Atom> = m.iter().map(|&i| c.body[i].clone()).collect();
            if !is_connected(&m_atoms) {
                continue;
            }
            let mut theta = p.subst.clone();
            let mut r = Vec::new();
            for (k, a) in def.clause.body.iter().enumerate() {
                if p.pos[k].is_some() {
                    continue;
                }
                for v in a.vars() {
                    if !theta.contains_key(&v) {
                        let f = t.var_gen().fresh_like(&v);
                        theta.insert(v, Term::Var(f));
                    }
                }
                r.push(a.apply(&theta));
            }
            let f = block.iter().copied().filter(|i| !m.contains(i)).collect();
            splits.push(Split {
                def: def.clone(),
                theta,
                m,
                f,
                r,
            });
        }
    }
    splits.sort_by(|a, b| b.m.len().cmp(&a.m.len()).then_with(|| a.m.cmp(&b.m)));
    for s in splits {
        if applicable(t, c, &s)? {
            return apply_split(t, c, s);
        }
    }
    Ok(None)
}

fn applicable(t: &Transformer, c: &Clause, s: &Split) -> Result<bool, RunError> {
    let f: Vec<Atom> = s.f.iter().map(|&i| c.body[i].clone()).collect();
    for a in f.iter().chain(&s.r) {
        let m = t.mode(&a.pred)?;
        if !(m.total && m.functional) {
            return Ok(false);
        }
    }
    let v = source_vars(&s.r, t.modes())?;
    let cvars = c.vars();
    if vars_of(&s.r).iter().any(|x| !v.contains(x) && cvars.contains(x)) {
        return Ok(false);
    }
    let Some(h) = c.head_pred() else { return Ok(true) };
    let mut levels = t.levels.clone();
    for a in f.iter().chain(&s.r) {
        levels.gt(h, &a.pred);
    }
    levels.ge(h, s.def.pred());
    Ok(levels.is_satisfiable())
}

fn apply_split(t: &mut Transformer, c: &Clause, s: Split) -> Result<Option<Clause>, RunError> {
    let f: Vec<Atom> = s.f.iter().map(|&i| c.body[i].clone()).collect();
    if let Some(h) = c.head_pred().map(str::to_string) {
        for a in f.iter().chain(&s.r) {
            let p = a.pred.clone();
            t.levels.gt(&h, &p);
        }
    }
    let x = source_vars(&f, t.modes())?;
    let y: Vec<Var> = vars_of(&f).into_iter().filter(|v| !x.contains(v)).collect();
    let v = source_vars(&s.r, t.modes())?;
    let w: Vec<Var> = vars_of(&s.r).into_iter().filter(|u| !v.contains(u)).collect();
    let mut z: Vec<Var> = Vec::new();
    for u in x.iter().chain(&v).chain(&w).filter(|u| u.is_basic()) {
        if !z.contains(u) {
            z.push(u.clone());
        }
    }
    let n_in = z.len();
    for u in y.iter().filter(|u| u.is_basic()) {
        if !z.contains(u) {
            z.push(u.clone());
        }
    }
    let bx: Vec<Var> = x.iter().filter(|u| u.is_basic()).cloned().collect();
    let dc = project_with(&c.constraint, &bx, t.ceiling);
    let body: Vec<Atom> = f.iter().chain(&s.r).cloned().collect();

    let (diff_id, dtheta) = match reusable(t, &body, &z, n_in, &dc) {
        Some(hit) => hit,
        None => {
            let d = t.define(DefKind::Difference, None, z, (0..n_in).collect(), dc, body)?;
            (d.clause.id, Subst::default())
        }
    };
    let Some(c1) = soft(t.diff_replace(c, &s.f, &s.r, diff_id, &dtheta))? else {
        return Ok(None);
    };
    let inst: Vec<Atom> = s.def.clause.body.iter().map(|a| a.apply(&s.theta)).collect();
    let at = locate(&c1.body, &inst).expect("matched atoms survive the replacement");
    match t.fold(&c1, s.def.clause.id, &at, &s.theta) {
        Ok(r) => Ok(Some(r)),
        Err(RuleError::NotEntailed(..)) => {
            let r = generalize(t, &c1, &s.def, &s.theta, &at)?;
            Ok(Some(match r {
                Some(r) => r,
                None => project(t, &c1, &at)?,
            }))
        }
        Err(RuleError::Model(e)) => Err(e.into()),
        Err(_) => Ok(Some(project(t, &c1, &at)?)),
    }
}

/// An existing difference definition that is a variant of `diff(z) ← dc,
/// body` with the same input/output split.
fn reusable(t: &Transformer, body: &[Atom], z: &[Var], n_in: usize, dc: &Constraint) -> Option<(crate::ClauseId, Subst)> {
    for def in t.defs.iter().rev().filter(|d| d.kind == DefKind::Difference) {
        let d = &def.clause;
        let Some((theta, _)) = instance_of(&d.body, body) else {
            continue;
        };
        if !is_renaming(&theta) {
            continue;
        }
        let Ok(mode) = t.mode(def.pred()) else { continue };
        let head = d.head.as_ref().unwrap();
        let img = |i: &usize| match &head.args[*i] {
            Term::Var(v) => image(v, &theta).as_var().cloned(),
            _ => None,
        };
        let ins: Option<Vec<Var>> = mode.inputs.iter().map(img).collect();
        let outs: Option<Vec<Var>> = mode.outputs.iter().map(img).collect();
        let (Some(ins), Some(outs)) = (ins, outs) else { continue };
        let same = |a: &[Var], b: &[Var]| a.len() == b.len() && a.iter().all(|v| b.contains(v));
        if !same(&ins, &z[..n_in]) || !same(&outs, &z[n_in..]) {
            continue;
        }
        let dd = d.apply(&theta).constraint;
        if entails(dc, &dd) && entails(&dd, dc) {
            return Some((d.id, theta));
        }
    }
    None
}

fn is_renaming(s: &Subst) -> bool {
    let mut seen = Vec::new();
    s.values().all(|t| match t {
        Term::Var(w) if !seen.contains(&w) => {
            seen.push(w);
            true
        }
        _ => false,
    })
}
