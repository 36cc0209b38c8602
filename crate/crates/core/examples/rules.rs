//! Applies the rules by hand on the reverse problem: a definition for the
//! goal body, a fold of the goal, and the unfolding of the definition. The
//! ledger and the level constraints record what happened.
//!
//! cargo run --example rules

use adtfree::constraint::Constraint;
use adtfree::frontend::parse_problem;
use adtfree::model::Subst;
use adtfree::rules::{DefKind, Transformer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/problems/reverse.chc"))?;
    let p = parse_problem(&src)?;
    let goal = p.goals().next().unwrap().clone();
    let mut t = Transformer::new(&p)?;

    let head_vars = goal.constraint.vars();
    let d = t.define(DefKind::Projection, None, head_vars, vec![], Constraint::top(), goal.body.clone())?;
    let at: Vec<usize> = (0..goal.body.len()).collect();
    let folded = t.fold(&goal, d.clause.id, &at, &Subst::default())?;
    println!("folded: {folded}");

    // the definition has the level of append, so unfolding append discharges it
    t.levels.eq(d.pred(), "append");
    for u in t.unfold(&d.clause, 0)? {
        println!("unfolded: {}", u.clause);
    }
    println!("\nledger:\n{}", t.ledger);
    println!("levels:\n{}", t.levels);
    println!("audit: {:?}", t.ledger.u_audit());
    Ok(())
}
