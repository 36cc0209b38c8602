//! Transforms a problem and decides it with an external Horn solver.
//!
//! cargo run --example decide -- problems/reverse_star.chc "z3 fp.spacer.global=true {file}"

use std::time::Duration;

use adtfree::algorithm::Config;
use adtfree::frontend::parse_problem;
use adtfree::solver::{decide, ExternalSolver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/problems/reverse.chc").into());
    let cmd = args.next().unwrap_or_else(|| "z3 fp.spacer.global=true {file}".into());
    let problem = parse_problem(&std::fs::read_to_string(&path)?)?;
    let solver = ExternalSolver::new(cmd, Duration::from_secs(60));
    let report = decide(&problem, &Config::default(), Some(&solver));
    println!("{path}: {}", report.decision);
    if let Some(v) = &report.verdict {
        println!("  solver on transformed clauses: {v}");
    }
    if let Some(f1) = &report.f1 {
        println!("  functionality of difference predicates: {f1:?}");
    }
    Ok(())
}
