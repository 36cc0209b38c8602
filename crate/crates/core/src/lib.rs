//! Removal of algebraic data types from constrained Horn clauses.
//!
//! The pipeline is: parse a problem ([`frontend`]), transform it into an
//! equisatisfiable-when-conditions-hold set of clauses over integers and
//! booleans only ([`algorithm`]), and hand the result to an external Horn
//! solver ([`solver`]), interpreting its answer as `sat`, `unsat` or
//! `unknown`.
//!
//! ```no_run
//! use adtfree::{frontend::parse_problem, algorithm::{run, Config, RunOutcome}};
//!
//! let src = std::fs::read_to_string("problems/reverse.chc").unwrap();
//! let problem = parse_problem(&src).unwrap();
//! match run(&problem, &Config::default()).unwrap() {
//!     RunOutcome::Transformed(t) => println!("{}", t.output),
//!     other => println!("{other:?}"),
//! }
//! ```

pub mod algorithm;
pub mod cli;
pub mod constraint;
pub mod frontend;
pub mod model;
pub mod rules;
pub mod solver;

pub use model::{Atom, Clause, ClauseId, ClauseSet, ModeSignature, Sort, Term, Var};
