use std::fmt::Write;

use crate::model::{Atom, Clause, ClauseSet, Sort, Term};

/// Canonical text of a problem: declarations first, then the clauses in
/// order. Lists of a list-shaped ADT are printed with `[H|T]` sugar.
pub fn print_problem(cs: &ClauseSet) -> String {
    let mut out = String::new();
    for adt in &cs.adts {
        let ctors: Vec<String> = adt
            .ctors
            .iter()
            .map(|c| {
                if c.args.is_empty() {
                    c.name.to_string()
                } else {
                    format!("{}({})", c.name, join(c.args.iter().map(Sort::to_string)))
                }
            })
            .collect();
        let _ = writeln!(out, ":- adt {} = {}.", adt.name, ctors.join(" | "));
    }
    for (p, sorts) in &cs.preds {
        if sorts.is_empty() {
            let _ = writeln!(out, ":- pred {p}.");
        } else {
            let _ = writeln!(out, ":- pred {p}({}).", join(sorts.iter().map(Sort::to_string)));
        }
    }
    for (p, m) in &cs.modes {
        let n = m.inputs.len() + m.outputs.len();
        if n > 0 {
            let dirs = (0..n).map(|i| if m.inputs.contains(&i) { "in" } else { "out" });
            let _ = writeln!(out, ":- mode {p}({}).", join(dirs));
        }
        let kw = match (m.total, m.functional) {
            (true, true) => Some("total_functional"),
            (true, false) => Some("total"),
            (false, true) => Some("functional"),
            _ => None,
        };
        if let Some(kw) = kw {
            let _ = writeln!(out, ":- {kw} {p}/{n}.");
        }
    }
    for c in &cs.clauses {
        out.push_str(&print_clause(cs, c));
        out.push('\n');
    }
    out
}

pub fn print_clause(cs: &ClauseSet, c: &Clause) -> String {
    let head = match &c.head {
        Some(h) => print_atom(cs, h),
        None => "false".into(),
    };
    let mut parts: Vec<String> = Vec::new();
    if c.constraint.is_false() {
        parts.push("1 =< 0".into());
    } else {
        parts.extend(c.constraint.atoms().iter().map(|a| a.to_string()));
    }
    parts.extend(c.body.iter().map(|a| print_atom(cs, a)));
    if parts.is_empty() {
        format!("{head}.")
    } else {
        format!("{head} :- {}.", parts.join(", "))
    }
}

pub fn print_atom(cs: &ClauseSet, a: &Atom) -> String {
    if a.args.is_empty() {
        return a.pred.to_string();
    }
    format!("{}({})", a.pred, join(a.args.iter().map(|t| print_term(cs, t))))
}

pub fn print_term(cs: &ClauseSet, t: &Term) -> String {
    let Term::App { ctor, sort, args } = t else {
        return t.to_string();
    };
    let shape = match sort {
        Sort::Adt(n) => cs.adt(n).and_then(|a| a.list_shape()),
        _ => None,
    };
    match shape {
        Some((nil, _)) if nil.name == *ctor => "[]".into(),
        Some((nil, cons)) if cons.name == *ctor => {
            let mut items = vec![print_term(cs, &args[0])];
            let mut tail = &args[1];
            loop {
                match tail {
                    Term::App { ctor, args, .. } if *ctor == cons.name => {
                        items.push(print_term(cs, &args[0]));
                        tail = &args[1];
                    }
                    Term::App { ctor, .. } if *ctor == nil.name => return format!("[{}]", items.join(",")),
                    _ => return format!("[{}|{}]", items.join(","), print_term(cs, tail)),
                }
            }
        }
        _ if args.is_empty() => ctor.to_string(),
        _ => format!("{ctor}({})", join(args.iter().map(|a| print_term(cs, a)))),
    }
}

fn join<S: AsRef<str>>(it: impl Iterator<Item = S>) -> String {
    it.map(|s| s.as_ref().to_string()).collect::<Vec<_>>().join(",")
}
