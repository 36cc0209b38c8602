//! The functionality check for difference predicates: the goals it adds and
//! the solver's answer on them.
//!
//! cargo run --example functionality -- "z3 fp.spacer.global=true {file}"

use std::time::Duration;

use adtfree::algorithm::{run, Config, RunOutcome};
use adtfree::frontend::{parse_problem, print_clause};
use adtfree::solver::{check_f1, fun_diff_goals, ExternalSolver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cmd = std::env::args().nth(1).unwrap_or_else(|| "z3 fp.spacer.global=true {file}".into());
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/problems/reverse_star.chc"))?;
    let RunOutcome::Transformed(t) = run(&parse_problem(&src)?, &Config::default())? else {
        return Err("no fixpoint".into());
    };
    let diffs = t.diff_preds();
    for d in &diffs {
        for g in fun_diff_goals(d, &t.output, 100) {
            println!("{}", print_clause(&t.output, &g));
        }
    }
    let solver = ExternalSolver::new(cmd, Duration::from_secs(30));
    println!("check_f1: {:?}", check_f1(&diffs, &t.output, &solver));
    Ok(())
}
