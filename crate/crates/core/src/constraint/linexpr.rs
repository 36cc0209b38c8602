use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::model::Var;

/// `Σ coeffs[x]·x + constant` with integer coefficients. Boolean variables
/// participate as 0/1 integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinExpr {
    pub coeffs: BTreeMap<Var, BigInt>,
    pub constant: BigInt,
}

impl LinExpr {
    pub fn zero() -> Self {
        LinExpr::default()
    }

    pub fn constant(k: impl Into<BigInt>) -> Self {
        LinExpr {
            coeffs: BTreeMap::new(),
            constant: k.into(),
        }
    }

    pub fn var(v: &Var) -> Self {
        Self::term(1, v)
    }

    pub fn term(a: impl Into<BigInt>, v: &Var) -> Self {
        let mut e = LinExpr::zero();
        e.add_term(a.into(), v);
        e
    }

    pub fn add_term(&mut self, a: BigInt, v: &Var) {
        if a.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v.clone()).or_insert_with(BigInt::zero);
        *entry += a;
        if entry.is_zero() {
            self.coeffs.remove(v);
        }
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (v, a) in &other.coeffs {
            out.add_term(a.clone(), v);
        }
        out.constant += &other.constant;
        out
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> LinExpr {
        if k.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            coeffs: self.coeffs.iter().map(|(v, a)| (v.clone(), a * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn coeff(&self, v: &Var) -> BigInt {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn substitute(&self, map: &HashMap<Var, LinExpr>) -> LinExpr {
        let mut out = LinExpr::constant(self.constant.clone());
        for (v, a) in &self.coeffs {
            match map.get(v) {
                Some(e) => out = out.add(&e.scale(a)),
                None => out.add_term(a.clone(), v),
            }
        }
        out
    }

    pub fn eval(&self, model: &HashMap<Var, BigInt>) -> Option<BigInt> {
        let mut acc = self.constant.clone();
        for (v, a) in &self.coeffs {
            acc += a * model.get(v)?;
        }
        Some(acc)
    }
}

impl fmt::Debug for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, a) in &self.coeffs {
            write_term(f, a, &v.to_string(), first)?;
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_positive() {
            write!(f, "+{}", self.constant)
        } else if self.constant.is_negative() {
            write!(f, "{}", self.constant)
        } else {
            Ok(())
        }
    }
}

pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, a: &BigInt, v: &str, first: bool) -> fmt::Result {
    if a.is_negative() {
        write!(f, "-")?;
    } else if !first {
        write!(f, "+")?;
    }
    let m = a.abs();
    if m.is_one() {
        write!(f, "{v}")
    } else {
        write!(f, "{m}*{v}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Eq,
    Ne,
}

/// Normalized atomic constraint `Σ coeffs[x]·x REL rhs`.
///
/// Invariants: at least one coefficient; coefficients have gcd 1; for `Eq`
/// and `Ne` the first coefficient is positive; `Le` constants are tightened
/// to the integer floor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinAtom {
    pub coeffs: BTreeMap<Var, BigInt>,
    pub rel: Rel,
    pub rhs: BigInt,
}

/// Result of normalizing a relation: it may fold to a truth value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Norm {
    True,
    False,
    Atom(LinAtom),
}

impl LinAtom {
    /// Normalizes `lhs REL rhs`.
    pub fn new(lhs: &LinExpr, rel: Rel, rhs: &LinExpr) -> Norm {
        let d = lhs.sub(rhs);
        let k = -d.constant.clone();
        Self::from_parts(d.coeffs, rel, k)
    }

    pub fn from_parts(coeffs: BTreeMap<Var, BigInt>, rel: Rel, k: BigInt) -> Norm {
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        if coeffs.is_empty() {
            let holds = match rel {
                Rel::Le => !k.is_negative(),
                Rel::Eq => k.is_zero(),
                Rel::Ne => !k.is_zero(),
            };
            return if holds { Norm::True } else { Norm::False };
        }
        let g = coeffs
            .values()
            .fold(BigInt::zero(), |g, a| g.gcd(a));
        let (mut coeffs, mut k) = (coeffs, k);
        match rel {
            Rel::Le => {
                for a in coeffs.values_mut() {
                    *a /= &g;
                }
                k = k.div_floor(&g);
            }
            Rel::Eq | Rel::Ne => {
                if !(&k % &g).is_zero() {
                    return if rel == Rel::Eq { Norm::False } else { Norm::True };
                }
                let sign = if coeffs.values().next().unwrap().is_negative() {
                    -BigInt::one()
                } else {
                    BigInt::one()
                };
                let div = &g * &sign;
                for a in coeffs.values_mut() {
                    *a /= &div;
                }
                k /= &div;
            }
        }
        Norm::Atom(LinAtom { coeffs, rel, rhs: k })
    }

    pub fn lhs(&self) -> LinExpr {
        LinExpr {
            coeffs: self.coeffs.clone(),
            constant: BigInt::zero(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coeffs.keys()
    }

    pub fn mentions(&self, v: &Var) -> bool {
        self.coeffs.contains_key(v)
    }

    pub fn holds(&self, model: &HashMap<Var, BigInt>) -> Option<bool> {
        let l = self.lhs().eval(model)?;
        Some(match self.rel {
            Rel::Le => l <= self.rhs,
            Rel::Eq => l == self.rhs,
            Rel::Ne => l != self.rhs,
        })
    }

    pub fn substitute(&self, map: &HashMap<Var, LinExpr>) -> Norm {
        let e = self.lhs().substitute(map);
        LinAtom::new(&e, self.rel, &LinExpr::constant(self.rhs.clone()))
    }

    /// Negation as a disjunction of normalized atoms (integer semantics).
    pub fn negate(&self) -> Vec<Norm> {
        let l = self.lhs();
        let k = LinExpr::constant(self.rhs.clone());
        match self.rel {
            // ¬(l ≤ k)  ⇔  l ≥ k+1
            Rel::Le => vec![LinAtom::new(&k.add(&LinExpr::constant(1)), Rel::Le, &l)],
            Rel::Eq => vec![LinAtom::new(&l, Rel::Ne, &k)],
            Rel::Ne => vec![LinAtom::new(&l, Rel::Eq, &k)],
        }
    }

    /// Splits an equality into two inequalities; other atoms are returned as is.
    pub fn split_eq(&self) -> Vec<LinAtom> {
        if self.rel != Rel::Eq {
            return vec![self.clone()];
        }
        let l = self.lhs();
        let k = LinExpr::constant(self.rhs.clone());
        [LinAtom::new(&l, Rel::Le, &k), LinAtom::new(&k, Rel::Le, &l)]
            .into_iter()
            .filter_map(|n| match n {
                Norm::Atom(a) => Some(a),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Debug for LinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints with positive terms on the left and negative ones moved right,
/// e.g. `N2 =\= N0+N1`.
impl fmt::Display for LinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pos: Vec<_> = self.coeffs.iter().filter(|(_, a)| a.is_positive()).collect();
        let neg: Vec<_> = self.coeffs.iter().filter(|(_, a)| a.is_negative()).collect();
        let op = match self.rel {
            Rel::Le => "=<",
            Rel::Eq => "=",
            Rel::Ne => "=\\=",
        };
        let side = |f: &mut fmt::Formatter<'_>, terms: &[(&Var, &BigInt)], k: &BigInt, flip: bool| -> fmt::Result {
            let mut first = true;
            for (v, a) in terms {
                let a = if flip { -(*a).clone() } else { (*a).clone() };
                write_term(f, &a, &v.to_string(), first)?;
                first = false;
            }
            if first {
                write!(f, "{k}")
            } else if k.is_positive() {
                write!(f, "+{k}")
            } else if k.is_negative() {
                write!(f, "{k}")
            } else {
                Ok(())
            }
        };
        // lhs: positive terms (+ constant when there are none on the right and rhs<0)
        if pos.is_empty() {
            // 0 op -neg + rhs  → write as  -rhs op |neg|
            side(f, &[], &(-self.rhs.clone()), false)?;
            write!(f, " {op} ")?;
            side(f, &neg, &BigInt::zero(), true)
        } else {
            side(f, &pos, &BigInt::zero(), false)?;
            write!(f, " {op} ")?;
            side(f, &neg, &self.rhs, true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Var {
        Var::int("X")
    }
    fn y() -> Var {
        Var::int("Y")
    }

    #[test]
    fn tightening_of_inequalities() {
        // 2X ≤ 3  →  X ≤ 1
        let n = LinAtom::new(&LinExpr::term(2, &x()), Rel::Le, &LinExpr::constant(3));
        let Norm::Atom(a) = n else { panic!() };
        assert_eq!(a.rhs, BigInt::from(1));
        assert_eq!(a.coeffs[&x()], BigInt::from(1));
    }

    #[test]
    fn equalities_without_integer_solutions_fold_to_false() {
        let e = LinExpr::term(2, &x()).add(&LinExpr::term(4, &y()));
        assert_eq!(LinAtom::new(&e, Rel::Eq, &LinExpr::constant(3)), Norm::False);
        assert_eq!(LinAtom::new(&e, Rel::Ne, &LinExpr::constant(3)), Norm::True);
    }

    #[test]
    fn sign_normalization_makes_equalities_canonical() {
        let a = LinAtom::new(&LinExpr::var(&x()), Rel::Eq, &LinExpr::var(&y()));
        let b = LinAtom::new(&LinExpr::var(&y()), Rel::Eq, &LinExpr::var(&x()));
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_atoms() {
        assert_eq!(LinAtom::new(&LinExpr::constant(0), Rel::Le, &LinExpr::constant(1)), Norm::True);
        assert_eq!(LinAtom::new(&LinExpr::constant(2), Rel::Le, &LinExpr::constant(1)), Norm::False);
        assert_eq!(LinAtom::new(&LinExpr::var(&x()), Rel::Eq, &LinExpr::var(&x())), Norm::True);
    }

    #[test]
    fn display_moves_negative_terms_right() {
        let n2 = Var::int("N2");
        let e = LinExpr::var(&Var::int("N0")).add(&LinExpr::var(&Var::int("N1")));
        let Norm::Atom(a) = LinAtom::new(&LinExpr::var(&n2), Rel::Ne, &e) else { panic!() };
        let s = a.to_string();
        assert!(s == "N2 =\\= N0+N1" || s == "N0+N1 =\\= N2", "{s}");
    }
}
