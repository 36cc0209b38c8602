//! Runs the bundled corpus and prints the result table, as `--batch` does.
//!
//! cargo run --example batch -- "z3 fp.spacer.global=true {file}"

use std::path::Path;

use adtfree::cli::{batch, render_table, Args};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args {
        input: None,
        solver: std::env::args().nth(1),
        timeout: 60,
        max_iterations: 30,
        emit_smtlib: None,
        no_diff: false,
        trace: None,
        batch: None,
        workers: None,
    };
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("problems/corpus");
    let rows = batch(&args, &dir)?;
    print!("{}", render_table(&rows));
    Ok(())
}
