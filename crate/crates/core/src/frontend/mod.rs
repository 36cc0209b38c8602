//! The problem-file dialect: a Prolog-like clause syntax with declarations
//! of ADTs, predicate signatures, modes and totality/functionality.
//!
//! ```text
//! :- adt list = nil | cons(int, list).
//! :- pred len(list, int).
//! :- mode len(in, out).
//! :- total_functional len/2.
//! len([], N) :- N = 0.
//! len([X|Xs], N1) :- N1 = N0 + 1, len(Xs, N0).
//! false :- N < 0, len(Xs, N).
//! ```

mod lexer;
mod parser;
mod printer;

use thiserror::Error;

use crate::model::{ClauseSet, ModelError};

pub use printer::{print_atom, print_clause, print_problem, print_term};

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: undeclared {what}")]
    Undeclared { line: usize, col: usize, what: String },
    #[error("{line}:{col}: `{pred}` expects {expected} arguments, found {found}")]
    Arity {
        line: usize,
        col: usize,
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("{line}:{col}: {msg}")]
    Sort { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A parsed problem plus the verdict announced by a `% expect: <verdict>`
/// comment, if any.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub problem: ClauseSet,
    pub expect: Option<String>,
}

/// Parses a problem. Clauses are numbered from 1 in order of appearance.
pub fn parse_problem(src: &str) -> Result<ClauseSet, FrontendError> {
    parse_problem_file(src).map(|p| p.problem)
}

pub fn parse_problem_file(src: &str) -> Result<ProblemFile, FrontendError> {
    parser::parse(src)
}
