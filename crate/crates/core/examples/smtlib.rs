//! Writes the SMT-LIB HORN script of a transformed problem to stdout.
//!
//! cargo run --example smtlib -- problems/corpus/07_reverse_sum.chc

use adtfree::algorithm::{run, Config, RunOutcome};
use adtfree::frontend::parse_problem;
use adtfree::solver::emit_smtlib;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/problems/reverse.chc").into());
    let p = parse_problem(&std::fs::read_to_string(path)?)?;
    let RunOutcome::Transformed(t) = run(&p, &Config::default())? else {
        return Err("transformation did not produce clauses".into());
    };
    print!("{}", emit_smtlib(&t.output)?);
    Ok(())
}
