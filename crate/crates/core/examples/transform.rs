//! Removes the lists from a problem file and prints the resulting clauses.
//!
//! cargo run --example transform -- problems/reverse.chc

use adtfree::algorithm::{run, Config, RunOutcome};
use adtfree::frontend::{parse_problem, print_problem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/problems/reverse.chc").into());
    let problem = parse_problem(&std::fs::read_to_string(path)?)?;
    match run(&problem, &Config::default())? {
        RunOutcome::Transformed(t) => {
            println!("% {} iteration(s), {} definition(s)", t.iterations, t.defs.len());
            for d in &t.defs {
                println!("% {:?}: {}", d.kind, d.clause);
            }
            print!("{}", print_problem(&t.output));
        }
        RunOutcome::IterationLimit { iterations, defs } => {
            println!("no fixpoint after {iterations} iterations ({defs} definitions)")
        }
        RunOutcome::LevelUnsat(t) => println!("level constraints unsatisfiable:\n{}", t.levels),
    }
    Ok(())
}
