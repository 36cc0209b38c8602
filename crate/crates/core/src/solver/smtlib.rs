//! SMT-LIB 2 emission in the HORN logic.
//!
//! Predicate names are mangled to `[A-Za-z0-9_]`: other characters become
//! `_xHH` (hex byte), and a `p_` prefix is added when the result would
//! start with a digit or clash with an SMT-LIB reserved word. The table is
//! written as comments at the top of the script. Clause identifiers are
//! written as `; clause N` right before each assertion.

use std::collections::HashMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::SolverError;
use crate::constraint::{LinAtom, Rel};
use crate::model::{Atom, Clause, ClauseSet, Sort, Term, Var};

const RESERVED: &[&str] = &[
    "and", "or", "not", "ite", "let", "forall", "exists", "true", "false", "assert", "distinct", "par", "as", "_",
];

pub fn mangle(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for b in name.bytes() {
        if b.is_ascii_alphanumeric() || b == b'_' {
            out.push(b as char);
        } else {
            let _ = write!(out, "_x{b:02X}");
        }
    }
    if out.is_empty() || out.starts_with(|c: char| c.is_ascii_digit()) || RESERVED.contains(&out.as_str()) {
        out.insert_str(0, "p_");
    }
    out
}

fn sort_name(s: &Sort) -> Result<&'static str, SolverError> {
    match s {
        Sort::Int => Ok("Int"),
        Sort::Bool => Ok("Bool"),
        Sort::Adt(n) => Err(SolverError::NotBasic(format!("sort {n}"))),
    }
}

fn num(n: &BigInt) -> String {
    if n.is_negative() {
        format!("(- {})", n.abs())
    } else {
        n.to_string()
    }
}

/// Variables get a `v_` prefix so they cannot capture predicate names.
fn var_name(v: &Var) -> String {
    format!("v_{}", mangle(&v.name))
}

fn arith(v: &Var) -> String {
    match v.sort {
        Sort::Bool => format!("(ite {} 1 0)", var_name(v)),
        _ => var_name(v),
    }
}

fn lin_atom(a: &LinAtom) -> String {
    let mut terms: Vec<String> = a
        .coeffs
        .iter()
        .map(|(v, k)| {
            if k.is_one() {
                arith(v)
            } else {
                format!("(* {} {})", num(k), arith(v))
            }
        })
        .collect();
    let lhs = match terms.len() {
        0 => "0".to_string(),
        1 => terms.pop().unwrap(),
        _ => format!("(+ {})", terms.join(" ")),
    };
    let rhs = num(&a.rhs);
    match a.rel {
        Rel::Le => format!("(<= {lhs} {rhs})"),
        Rel::Eq => format!("(= {lhs} {rhs})"),
        Rel::Ne => format!("(not (= {lhs} {rhs}))"),
    }
}

fn term(t: &Term, c: &Clause) -> Result<String, SolverError> {
    match t {
        Term::Var(v) => Ok(var_name(v)),
        Term::Int(n) => Ok(num(&BigInt::from(*n))),
        Term::Bool(b) => Ok(b.to_string()),
        Term::App { .. } => Err(SolverError::NotBasic(format!("clause {}", c.id))),
    }
}

fn atom(a: &Atom, c: &Clause, names: &HashMap<&str, String>) -> Result<String, SolverError> {
    let name = &names[&*a.pred];
    if a.args.is_empty() {
        return Ok(name.clone());
    }
    let args: Result<Vec<String>, _> = a.args.iter().map(|t| term(t, c)).collect();
    Ok(format!("({name} {})", args?.join(" ")))
}

/// One `assert` per clause; goals are implications to `false`.
pub fn emit_smtlib(cs: &ClauseSet) -> Result<String, SolverError> {
    let mut preds: Vec<&str> = cs.preds.keys().map(|p| &**p).collect();
    for c in &cs.clauses {
        for a in c.head.iter().chain(&c.body) {
            if !preds.contains(&&*a.pred) {
                preds.push(&a.pred);
            }
        }
    }
    let names: HashMap<&str, String> = preds.iter().map(|p| (*p, mangle(p))).collect();
    let mut out = String::from("(set-logic HORN)\n");
    for p in &preds {
        let _ = writeln!(out, "; pred {p} = {}", names[p]);
    }
    for p in &preds {
        let sorts: Vec<Sort> = match cs.preds.get(*p) {
            Some(s) => s.clone(),
            None => {
                let c = cs.clauses.iter().find_map(|c| c.head.iter().chain(&c.body).find(|a| &*a.pred == *p).cloned());
                c.map(|a| a.args.iter().map(Term::sort).collect()).unwrap_or_default()
            }
        };
        let sorts: Result<Vec<&str>, _> = sorts.iter().map(sort_name).collect();
        let _ = writeln!(out, "(declare-fun {} ({}) Bool)", names[p], sorts?.join(" "));
    }
    for c in &cs.clauses {
        let _ = writeln!(out, "; clause {}", c.id);
        let mut vars = c.vars();
        vars.sort_by(|a, b| a.name.cmp(&b.name));
        let mut conj: Vec<String> = Vec::new();
        if c.constraint.is_false() {
            conj.push("false".into());
        } else {
            conj.extend(c.constraint.atoms().iter().map(lin_atom));
        }
        for a in &c.body {
            conj.push(atom(a, c, &names)?);
        }
        let head = match &c.head {
            Some(h) => atom(h, c, &names)?,
            None => "false".into(),
        };
        let body = match conj.len() {
            0 => "true".to_string(),
            1 => conj.pop().unwrap(),
            _ => format!("(and {})", conj.join(" ")),
        };
        let imp = format!("(=> {body} {head})");
        if vars.is_empty() {
            let _ = writeln!(out, "(assert {imp})");
        } else {
            let binders: Result<Vec<String>, SolverError> = vars
                .iter()
                .map(|v| Ok(format!("({} {})", var_name(v), sort_name(&v.sort)?)))
                .collect();
            let _ = writeln!(out, "(assert (forall ({}) {imp}))", binders?.join(" "));
        }
    }
    out.push_str("(check-sat)\n");
    Ok(out)
}

/// The clause ids announced by the `; clause N` comments, in order.
pub fn clause_ids(script: &str) -> Vec<u32> {
    script
        .lines()
        .filter_map(|l| l.strip_prefix("; clause "))
        .filter_map(|n| n.trim().parse().ok())
        .collect()
}
