//! The constraint operations behind folding and generalization.
//!
//! cargo run --example constraints

use adtfree::constraint::{entails, is_satisfiable, project, widen, Constraint, LinExpr, Rel};
use adtfree::Var;

fn main() {
    let (x, y, z) = (Var::int("X"), Var::int("Y"), Var::int("Z"));
    let v = |v: &Var| LinExpr::var(v);
    let k = |n: i64| LinExpr::constant(n);

    // X = Y + 1, Y = Z + 1, Z >= 0
    let mut c = Constraint::top();
    c.add(&v(&x), Rel::Eq, &v(&y).add(&k(1)));
    c.add(&v(&y), Rel::Eq, &v(&z).add(&k(1)));
    c.add(&k(0), Rel::Le, &v(&z));
    println!("c            = {c}");
    println!("sat(c)       = {:?}", is_satisfiable(&c));
    println!("proj(c, X)   = {}", project(&c, std::slice::from_ref(&x)));
    println!("proj(c, X,Z) = {}", project(&c, &[x.clone(), z.clone()]));

    let mut d = Constraint::top();
    d.add(&k(2), Rel::Le, &v(&x));
    println!("c |= X >= 2  : {}", entails(&c, &d));

    // generalizing X = 0 against X = 1 keeps only X >= 0
    let mut c1 = Constraint::top();
    c1.add(&v(&x), Rel::Eq, &k(0));
    let mut c2 = Constraint::top();
    c2.add(&v(&x), Rel::Eq, &k(1));
    println!("widen(X=0, X=1) = {}", widen(&c1, &c2));

    // 2X = 2Y + 1 has rational but no integer solutions
    let mut odd = Constraint::top();
    odd.add(&v(&x).add(&v(&x)), Rel::Eq, &v(&y).add(&v(&y)).add(&k(1)));
    println!("sat(2X = 2Y + 1) = {:?}", is_satisfiable(&odd));
}
