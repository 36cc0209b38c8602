use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use indexmap::IndexMap;

use super::lexer::{lex, Tok, Token};
use super::{FrontendError, ProblemFile};
use crate::constraint::{Constraint, LinExpr, Rel};
use crate::model::{resolve, unify_terms, AdtDecl, Atom, Clause, ClauseId, ClauseSet, ModeSignature, ModelError, Sort, Subst, Term, Var};

/// Untyped term or arithmetic expression, as written.
#[derive(Debug, Clone)]
enum Raw {
    Var(String),
    Int(i64),
    App(String, Vec<Raw>),
    Nil,
    Cons(Box<Raw>, Box<Raw>),
    Add(Box<Raw>, Box<Raw>),
    Sub(Box<Raw>, Box<Raw>),
    Mul(Box<Raw>, Box<Raw>),
    Neg(Box<Raw>),
}

impl Raw {
    fn is_arith(&self) -> bool {
        matches!(self, Raw::Add(..) | Raw::Sub(..) | Raw::Mul(..) | Raw::Neg(..))
    }

    /// A product of two non-constant factors.
    fn nonlinear(&self) -> bool {
        let ground = |r: &Raw| {
            let mut vs = Vec::new();
            r.vars(&mut vs);
            vs.is_empty()
        };
        match self {
            Raw::Mul(a, b) => (!ground(a) && !ground(b)) || a.nonlinear() || b.nonlinear(),
            Raw::Add(a, b) | Raw::Sub(a, b) => a.nonlinear() || b.nonlinear(),
            Raw::Neg(a) => a.nonlinear(),
            _ => false,
        }
    }

    fn vars(&self, out: &mut Vec<String>) {
        match self {
            Raw::Var(v) => out.push(v.clone()),
            Raw::Int(_) | Raw::Nil => {}
            Raw::App(_, args) => args.iter().for_each(|a| a.vars(out)),
            Raw::Cons(a, b) | Raw::Add(a, b) | Raw::Sub(a, b) | Raw::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Raw::Neg(a) => a.vars(out),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone)]
enum Lit {
    Atom(String, Vec<Raw>, (usize, usize)),
    Rel(Raw, Op, Raw, (usize, usize)),
}

struct RawClause {
    head: Option<(String, Vec<Raw>, (usize, usize))>,
    body: Vec<Lit>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    adts: Vec<AdtDecl>,
    preds: IndexMap<Arc<str>, Vec<Sort>>,
    modes: IndexMap<Arc<str>, ModeSignature>,
    /// Predicates with an explicit `mode` directive (totality directives
    /// may create a mode entry first).
    moded: HashSet<Arc<str>>,
    clauses: Vec<RawClause>,
    anon: usize,
}

pub fn parse(src: &str) -> Result<ProblemFile, FrontendError> {
    let (toks, expect) = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        adts: Vec::new(),
        preds: IndexMap::new(),
        modes: IndexMap::new(),
        moded: HashSet::new(),
        clauses: Vec::new(),
        anon: 0,
    };
    while p.pos < p.toks.len() {
        p.item()?;
    }
    let problem = p.finish()?;
    Ok(ProblemFile { problem, expect })
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FrontendError> {
        let (line, col) = self.here();
        Err(FrontendError::Syntax { line, col, msg: msg.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), FrontendError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, FrontendError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn item(&mut self) -> Result<(), FrontendError> {
        if self.eat(&Tok::Neck) {
            return self.directive();
        }
        let at = self.here();
        let name = self.ident("a clause head")?;
        let head = if name == "false" && self.peek() != Some(&Tok::LParen) {
            None
        } else {
            Some((name.clone(), self.args()?, at))
        };
        let mut body = Vec::new();
        if self.eat(&Tok::Neck) {
            loop {
                body.push(self.literal()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::Dot, "`.` at the end of the clause")?;
        self.clauses.push(RawClause { head, body });
        Ok(())
    }

    fn args(&mut self) -> Result<Vec<Raw>, FrontendError> {
        let mut out = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                out.push(self.expr()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(out)
    }

    fn literal(&mut self) -> Result<Lit, FrontendError> {
        let at = self.here();
        let lhs = self.expr()?;
        let op = match self.peek() {
            Some(Tok::Eq) => Op::Eq,
            Some(Tok::Ne) => Op::Ne,
            Some(Tok::Lt) => Op::Lt,
            Some(Tok::Le) => Op::Le,
            Some(Tok::Gt) => Op::Gt,
            Some(Tok::Ge) => Op::Ge,
            _ => {
                return match lhs {
                    Raw::App(name, args) if name == "true" && args.is_empty() => Ok(Lit::Rel(Raw::Int(0), Op::Eq, Raw::Int(0), at)),
                    Raw::App(name, args) if name == "false" && args.is_empty() => Ok(Lit::Rel(Raw::Int(0), Op::Eq, Raw::Int(1), at)),
                    Raw::App(name, args) => Ok(Lit::Atom(name, args, at)),
                    _ => Err(FrontendError::Syntax {
                        line: at.0,
                        col: at.1,
                        msg: "expected an atom or a constraint".into(),
                    }),
                };
            }
        };
        self.pos += 1;
        let rhs = self.expr()?;
        Ok(Lit::Rel(lhs, op, rhs, at))
    }

    fn expr(&mut self) -> Result<Raw, FrontendError> {
        let mut acc = self.product()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = Raw::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat(&Tok::Minus) {
                acc = Raw::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Raw, FrontendError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Star) {
            acc = Raw::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Raw, FrontendError> {
        if self.eat(&Tok::Minus) {
            return Ok(match self.unary()? {
                Raw::Int(n) => Raw::Int(-n),
                r => Raw::Neg(Box::new(r)),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Raw, FrontendError> {
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                if v == "_" {
                    self.anon += 1;
                    return Ok(Raw::Var(format!("_Anon{}", self.anon)));
                }
                Ok(Raw::Var(v))
            }
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Raw::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Raw::App(name, self.args()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                if self.eat(&Tok::RBrack) {
                    return Ok(Raw::Nil);
                }
                let mut items = vec![self.expr()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.expr()?);
                }
                let tail = if self.eat(&Tok::Bar) { self.expr()? } else { Raw::Nil };
                self.expect(Tok::RBrack, "`]`")?;
                Ok(items
                    .into_iter()
                    .rev()
                    .fold(tail, |t, h| Raw::Cons(Box::new(h), Box::new(t))))
            }
            _ => self.err("expected a term"),
        }
    }

    fn sort(&mut self) -> Result<Sort, FrontendError> {
        let (line, col) = self.here();
        let name = self.ident("a sort")?;
        Ok(match name.as_str() {
            "int" => Sort::Int,
            "bool" => Sort::Bool,
            _ if self.adts.iter().any(|a| *a.name == *name) => Sort::adt(&name),
            _ => {
                return Err(FrontendError::Undeclared {
                    line,
                    col,
                    what: format!("sort `{name}`"),
                })
            }
        })
    }

    fn sorts(&mut self) -> Result<Vec<Sort>, FrontendError> {
        let mut out = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                out.push(self.sort()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(out)
    }

    fn directive(&mut self) -> Result<(), FrontendError> {
        let kw = self.ident("a directive")?;
        match kw.as_str() {
            "adt" => {
                let name = self.ident("an ADT name")?;
                self.expect(Tok::Eq, "`=`")?;
                // register first so that recursive references resolve
                self.adts.push(AdtDecl::new(&name, vec![]));
                let mut ctors = Vec::new();
                loop {
                    let c = self.ident("a constructor")?;
                    ctors.push((c, self.sorts()?));
                    if !self.eat(&Tok::Bar) {
                        break;
                    }
                }
                let decl = AdtDecl::new(&name, ctors.iter().map(|(c, s)| (c.as_str(), s.clone())).collect());
                *self.adts.last_mut().unwrap() = decl;
            }
            "pred" => {
                let name = self.ident("a predicate name")?;
                let sorts = self.sorts()?;
                self.preds.insert(Arc::from(name.as_str()), sorts);
            }
            "mode" => {
                let (line, col) = self.here();
                let name = self.ident("a predicate name")?;
                let mut ins = Vec::new();
                let mut outs = Vec::new();
                self.expect(Tok::LParen, "`(`")?;
                let mut i = 0;
                loop {
                    match self.ident("`in` or `out`")?.as_str() {
                        "in" => ins.push(i),
                        "out" => outs.push(i),
                        other => return self.err(format!("expected `in` or `out`, found `{other}`")),
                    }
                    i += 1;
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RParen, "`)`")?;
                let Some(sorts) = self.preds.get(name.as_str()) else {
                    return Err(FrontendError::Undeclared {
                        line,
                        col,
                        what: format!("predicate `{name}`"),
                    });
                };
                if sorts.len() != i {
                    return Err(FrontendError::Arity {
                        line,
                        col,
                        pred: name,
                        expected: sorts.len(),
                        found: i,
                    });
                }
                let old = self.modes.get(name.as_str()).cloned().unwrap_or_default();
                if !self.moded.insert(Arc::from(name.as_str())) && (old.inputs != ins || old.outputs != outs) {
                    return Err(FrontendError::Syntax {
                        line,
                        col,
                        msg: format!("conflicting mode declarations for `{name}`"),
                    });
                }
                let mut m = ModeSignature::new(ins, outs);
                m.total = old.total;
                m.functional = old.functional;
                self.modes.insert(Arc::from(name.as_str()), m);
            }
            "total_functional" | "total" | "functional" => loop {
                let (line, col) = self.here();
                let name = self.ident("a predicate name")?;
                self.expect(Tok::Slash, "`/`")?;
                let Some(Tok::Int(n)) = self.next() else {
                    return self.err("expected an arity");
                };
                let Some(sorts) = self.preds.get(name.as_str()) else {
                    return Err(FrontendError::Undeclared {
                        line,
                        col,
                        what: format!("predicate `{name}`"),
                    });
                };
                if sorts.len() as i64 != n {
                    return Err(FrontendError::Arity {
                        line,
                        col,
                        pred: name,
                        expected: sorts.len(),
                        found: n.max(0) as usize,
                    });
                }
                let Some(m) = self.modes.get_mut(name.as_str()) else {
                    return Err(FrontendError::Model(ModelError::MissingMode(name)));
                };
                m.total |= kw != "functional";
                m.functional |= kw != "total";
                if !self.eat(&Tok::Comma) {
                    break;
                }
            },
            other => return self.err(format!("unknown directive `{other}`")),
        }
        self.expect(Tok::Dot, "`.` at the end of the directive")
    }

    fn finish(mut self) -> Result<ClauseSet, FrontendError> {
        let raw = std::mem::take(&mut self.clauses);
        let mut clauses = Vec::with_capacity(raw.len());
        for (i, rc) in raw.into_iter().enumerate() {
            clauses.push(self.clause(ClauseId(i as u32 + 1), rc)?);
        }
        for (p, sorts) in &self.preds {
            if sorts.is_empty() && !self.modes.contains_key(p) {
                self.modes.insert(p.clone(), ModeSignature::new(vec![], vec![]));
            }
        }
        for p in self.preds.keys() {
            if !self.modes.contains_key(p) {
                return Err(ModelError::MissingMode(p.to_string()).into());
            }
        }
        let mut cs = ClauseSet {
            adts: self.adts,
            preds: self.preds,
            modes: self.modes,
            clauses,
        };
        let mut gen = cs.var_gen();
        for c in &mut cs.clauses {
            c.normalize(&mut gen);
        }
        cs.validate()?;
        Ok(cs)
    }

    fn list_adt(&self, sort: &Sort) -> Option<(Arc<str>, Sort, Arc<str>)> {
        let Sort::Adt(n) = sort else { return None };
        let adt = self.adts.iter().find(|a| a.name == *n)?;
        let (nil, cons) = adt.list_shape()?;
        Some((nil.name.clone(), cons.args[0].clone(), cons.name.clone()))
    }

    fn ctor_sort(&self, name: &str) -> Option<Sort> {
        self.adts
            .iter()
            .find(|a| a.ctor(name).is_some())
            .map(|a| Sort::Adt(a.name.clone()))
    }

    /// Sort of a raw term if it can be told without context.
    fn sort_of(&self, r: &Raw, env: &HashMap<String, Sort>) -> Option<Sort> {
        match r {
            Raw::Var(v) => env.get(v).cloned(),
            Raw::Int(_) => Some(Sort::Int),
            Raw::App(n, _) if n == "true" || n == "false" => Some(Sort::Bool),
            Raw::App(n, _) => self.ctor_sort(n),
            Raw::Nil | Raw::Cons(..) => {
                let lists: Vec<&AdtDecl> = self.adts.iter().filter(|a| a.list_shape().is_some()).collect();
                (lists.len() == 1).then(|| Sort::Adt(lists[0].name.clone()))
            }
            _ => Some(Sort::Int),
        }
    }

    /// Assigns sorts to the variables of `r`, expected to have `sort`.
    fn infer(&self, r: &Raw, sort: &Sort, env: &mut HashMap<String, Sort>, at: (usize, usize)) -> Result<(), FrontendError> {
        let bad = |msg: String| FrontendError::Sort { line: at.0, col: at.1, msg };
        match r {
            Raw::Var(v) => match env.get(v) {
                Some(s) if s != sort => Err(bad(format!("{v} used as {s} and as {sort}"))),
                _ => {
                    env.insert(v.clone(), sort.clone());
                    Ok(())
                }
            },
            Raw::Int(_) if *sort == Sort::Int => Ok(()),
            Raw::Int(n) => Err(bad(format!("integer {n} where {sort} is expected"))),
            _ if r.is_arith() => {
                if *sort != Sort::Int {
                    return Err(bad(format!("arithmetic where {sort} is expected")));
                }
                if r.nonlinear() {
                    return Err(bad("nonlinear arithmetic".into()));
                }
                let mut vs = Vec::new();
                r.vars(&mut vs);
                vs.iter().try_for_each(|v| self.infer(&Raw::Var(v.clone()), &Sort::Int, env, at))
            }
            Raw::App(n, args) if (n == "true" || n == "false") && args.is_empty() => {
                if *sort == Sort::Bool {
                    Ok(())
                } else {
                    Err(bad(format!("`{n}` where {sort} is expected")))
                }
            }
            Raw::App(n, args) => {
                let Some(adt) = self.adts.iter().find(|a| a.ctor(n).is_some()) else {
                    return Err(FrontendError::Undeclared {
                        line: at.0,
                        col: at.1,
                        what: format!("constructor `{n}`"),
                    });
                };
                let ctor = adt.ctor(n).unwrap();
                if Sort::Adt(adt.name.clone()) != *sort {
                    return Err(bad(format!("constructor `{n}` where {sort} is expected")));
                }
                if ctor.args.len() != args.len() {
                    return Err(FrontendError::Arity {
                        line: at.0,
                        col: at.1,
                        pred: n.clone(),
                        expected: ctor.args.len(),
                        found: args.len(),
                    });
                }
                args.iter().zip(&ctor.args).try_for_each(|(a, s)| self.infer(a, s, env, at))
            }
            Raw::Nil | Raw::Cons(..) => {
                let Some((_, elem, _)) = self.list_adt(sort) else {
                    return Err(bad(format!("list where {sort} is expected")));
                };
                if let Raw::Cons(h, t) = r {
                    self.infer(h, &elem, env, at)?;
                    self.infer(t, sort, env, at)?;
                }
                Ok(())
            }
            _ => unreachable!(),
        }
    }

    fn clause(&self, id: ClauseId, rc: RawClause) -> Result<Clause, FrontendError> {
        let mut env: HashMap<String, Sort> = HashMap::new();
        let mut atoms: Vec<(&str, &[Raw], (usize, usize))> = Vec::new();
        if let Some((n, args, at)) = &rc.head {
            atoms.push((n, args, *at));
        }
        for l in &rc.body {
            if let Lit::Atom(n, args, at) = l {
                atoms.push((n, args, *at));
            }
        }
        for &(n, args, at) in &atoms {
            let sorts = self.signature(n, args.len(), at)?;
            for (a, s) in args.iter().zip(sorts) {
                self.infer(a, s, &mut env, at)?;
            }
        }
        // equations between terms may only be sortable after each other
        loop {
            let before = env.len();
            for l in &rc.body {
                if let Lit::Rel(a, _, b, at) = l {
                    let sort = self.sort_of(a, &env).or_else(|| self.sort_of(b, &env));
                    if let Some(s) = sort {
                        self.infer(a, &s, &mut env, *at)?;
                        self.infer(b, &s, &mut env, *at)?;
                    }
                }
            }
            if env.len() == before {
                break;
            }
        }
        for l in &rc.body {
            if let Lit::Rel(a, _, b, at) = l {
                if self.sort_of(a, &env).is_none() && self.sort_of(b, &env).is_none() {
                    self.infer(a, &Sort::Int, &mut env, *at)?;
                    self.infer(b, &Sort::Int, &mut env, *at)?;
                }
            }
        }

        let mut constraint = Constraint::top();
        let mut eqs: Vec<(Term, Term)> = Vec::new();
        let mut fresh = 0;
        let mut atom_of = |n: &str, args: &[Raw], constraint: &mut Constraint| -> Atom {
            let sorts = &self.preds[n];
            let args = args
                .iter()
                .zip(sorts)
                .map(|(a, s)| {
                    if a.is_arith() {
                        fresh += 1;
                        let v = Var::new(&format!("Arg_{fresh}"), s.clone());
                        constraint.add(&LinExpr::var(&v), Rel::Eq, &self.lin(a, &env));
                        Term::Var(v)
                    } else {
                        self.term(a, s, &env)
                    }
                })
                .collect();
            Atom::new(n, args)
        };
        let head = rc.head.as_ref().map(|(n, args, _)| atom_of(n, args, &mut constraint));
        let mut body = Vec::new();
        for l in &rc.body {
            match l {
                Lit::Atom(n, args, _) => body.push(atom_of(n, args, &mut constraint)),
                Lit::Rel(a, op, b, at) => {
                    let s = self.sort_of(a, &env).or_else(|| self.sort_of(b, &env)).unwrap_or(Sort::Int);
                    if !s.is_basic() {
                        if *op != Op::Eq {
                            return Err(FrontendError::Sort {
                                line: at.0,
                                col: at.1,
                                msg: format!("only `=` applies to terms of sort {s}"),
                            });
                        }
                        eqs.push((self.term(a, &s, &env), self.term(b, &s, &env)));
                        continue;
                    }
                    let (l, r) = (self.lin(a, &env), self.lin(b, &env));
                    let one = LinExpr::constant(1);
                    match op {
                        Op::Eq => constraint.add(&l, Rel::Eq, &r),
                        Op::Ne => constraint.add(&l, Rel::Ne, &r),
                        Op::Le => constraint.add(&l, Rel::Le, &r),
                        Op::Ge => constraint.add(&r, Rel::Le, &l),
                        Op::Lt => constraint.add(&l.add(&one), Rel::Le, &r),
                        Op::Gt => constraint.add(&r.add(&one), Rel::Le, &l),
                    }
                }
            }
        }
        let mut c = Clause::new(id, head, constraint, body);
        if !eqs.is_empty() {
            let mut s = Subst::default();
            if eqs.iter().all(|(a, b)| unify_terms(a, b, &mut s)) {
                c = c.apply(&resolve(&s));
            } else {
                c.constraint = Constraint::bottom();
            }
        }
        Ok(c)
    }

    fn signature(&self, n: &str, arity: usize, at: (usize, usize)) -> Result<&Vec<Sort>, FrontendError> {
        let sorts = self.preds.get(n).ok_or_else(|| FrontendError::Undeclared {
            line: at.0,
            col: at.1,
            what: format!("predicate `{n}`"),
        })?;
        if sorts.len() != arity {
            return Err(FrontendError::Arity {
                line: at.0,
                col: at.1,
                pred: n.to_string(),
                expected: sorts.len(),
                found: arity,
            });
        }
        Ok(sorts)
    }

    fn var(&self, v: &str, env: &HashMap<String, Sort>) -> Var {
        Var::new(v, env.get(v).cloned().unwrap_or(Sort::Int))
    }

    fn term(&self, r: &Raw, sort: &Sort, env: &HashMap<String, Sort>) -> Term {
        match r {
            Raw::Var(v) => Term::Var(self.var(v, env)),
            Raw::Int(n) => Term::Int(*n),
            Raw::App(n, _) if *sort == Sort::Bool => Term::Bool(n == "true"),
            Raw::App(n, args) => {
                let adt = self.adts.iter().find(|a| a.ctor(n).is_some()).unwrap();
                let ctor = adt.ctor(n).unwrap();
                let args = args.iter().zip(&ctor.args).map(|(a, s)| self.term(a, s, env)).collect();
                Term::app(n, sort.clone(), args)
            }
            Raw::Nil => {
                let (nil, _, _) = self.list_adt(sort).unwrap();
                Term::app(&nil, sort.clone(), vec![])
            }
            Raw::Cons(h, t) => {
                let (_, elem, cons) = self.list_adt(sort).unwrap();
                Term::app(&cons, sort.clone(), vec![self.term(h, &elem, env), self.term(t, sort, env)])
            }
            _ => unreachable!("arithmetic is flattened before term construction"),
        }
    }

    fn lin(&self, r: &Raw, env: &HashMap<String, Sort>) -> LinExpr {
        match r {
            Raw::Var(v) => LinExpr::var(&self.var(v, env)),
            Raw::Int(n) => LinExpr::constant(*n),
            Raw::App(n, _) => LinExpr::constant(i64::from(n == "true")),
            Raw::Add(a, b) => self.lin(a, env).add(&self.lin(b, env)),
            Raw::Sub(a, b) => self.lin(a, env).sub(&self.lin(b, env)),
            Raw::Neg(a) => self.lin(a, env).scale(&(-1).into()),
            Raw::Mul(a, b) => {
                let (x, y) = (self.lin(a, env), self.lin(b, env));
                if x.is_constant() {
                    y.scale(&x.constant)
                } else {
                    x.scale(&y.constant)
                }
            }
            Raw::Nil | Raw::Cons(..) => LinExpr::zero(),
        }
    }
}
