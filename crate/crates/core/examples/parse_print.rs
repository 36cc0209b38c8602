//! Parses a problem, shows what normalization did, and prints the canonical
//! form (which parses back to the same clauses).
//!
//! cargo run --example parse_print

use adtfree::frontend::{parse_problem_file, print_clause, print_problem};

const SRC: &str = "
% expect: sat
:- adt list = nil | cons(int, list).
:- pred len(list, int).
:- pred p(int).
:- mode len(in, out).
:- mode p(in).
:- total_functional len/2.
false :- N < 0, len(Xs, N).
len([], 0).
len([X|Xs], N1) :- N1 = N0 + 1, len(Xs, N0).
p(3).
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pf = parse_problem_file(SRC)?;
    let cs = &pf.problem;
    println!("expect: {:?}", pf.expect);
    for c in &cs.clauses {
        // constants in integer positions become variables plus an equation
        println!("{:>2}. {}", c.id, print_clause(cs, c));
    }
    let text = print_problem(cs);
    println!("\n{text}");
    let again = print_problem(&parse_problem_file(&text)?.problem);
    assert_eq!(text, again);

    match parse_problem_file(":- pred q(int).\nq(X) :- r(X).") {
        Err(e) => println!("error: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
