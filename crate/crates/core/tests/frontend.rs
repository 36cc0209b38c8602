//! Parsing, printing, and the command-line driver.

mod common;

use std::process::Command;

use adtfree::frontend::{parse_problem, parse_problem_file, print_problem, FrontendError};
use adtfree::model::variant::is_variant;

use common::*;

fn canonical_text(src: &str) -> String {
    print_problem(&parse_problem(src).unwrap())
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[test]
fn printing_then_parsing_is_the_identity_on_printed_forms() {
    let mut files = corpus();
    files.push(problem_path("reverse.chc"));
    files.push(problem_path("reverse_star.chc"));
    for f in files {
        let once = canonical_text(&std::fs::read_to_string(&f).unwrap());
        let twice = canonical_text(&once);
        assert_eq!(squash(&once), squash(&twice), "{}", f.display());
        let a = parse_problem(&once).unwrap();
        let b = parse_problem(&twice).unwrap();
        for (x, y) in a.clauses.iter().zip(&b.clauses) {
            assert!(is_variant(x, y), "{}: {x} vs {y}", f.display());
        }
    }
}

#[test]
fn reverse_has_nine_clauses() {
    let cs = load("reverse.chc");
    assert_eq!(cs.clauses.len(), 9);
    assert_eq!(cs.goals().count(), 1);
    assert_eq!(cs.preds.len(), 4);
}

#[test]
fn constant_in_a_basic_position_becomes_a_variable() {
    let cs = parse_problem(":- pred p(int).\n:- mode p(in).\np(3).").unwrap();
    let c = &cs.clauses[0];
    let x = c.head.as_ref().unwrap().args[0].as_var().expect("variable argument").clone();
    assert_eq!(c.constraint.to_string(), format!("{x} = 3"));
}

#[test]
fn recursive_length_call_outputs_the_predecessor() {
    let cs = load("reverse.chc");
    let c = cs.clauses.iter().find(|c| c.head_pred() == Some("len") && !c.body.is_empty()).unwrap();
    let mode = cs.mode("len").unwrap();
    let out = mode.output_vars(&c.body[0]);
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].name.as_ref(), "N0");
}

#[test]
fn expectation_comment_is_read() {
    let pf = parse_problem_file(&std::fs::read_to_string(problem_path("reverse_star.chc")).unwrap()).unwrap();
    assert_eq!(pf.expect.as_deref(), Some("unsat"));
}

#[test]
fn errors_carry_positions() {
    let cases = [
        (":- pred p(int).\np(X) :- X = .", 2),
        (":- pred p(int).\n\nq(1).", 3),
        (":- pred p(int).\np(1, 2).", 2),
        (":- adt list = nil | cons(int, list).\n:- pred p(list).\np(X) :- X > 0.", 3),
        ("p(1", 1),
        (":- pred p(int).\n:- mode p(in).\n:- mode p(out).", 3),
    ];
    for (src, line) in cases {
        let e = parse_problem(src).unwrap_err();
        let (l, c) = match &e {
            FrontendError::Syntax { line, col, .. }
            | FrontendError::Undeclared { line, col, .. }
            | FrontendError::Arity { line, col, .. }
            | FrontendError::Sort { line, col, .. } => (*line, *col),
            FrontendError::Model(m) => panic!("{src:?}: unpositioned {m}"),
        };
        assert_eq!(l, line, "{src:?}: {e}");
        assert!(c >= 1);
        assert!(e.to_string().starts_with(&format!("{l}:{c}:")));
    }
}

fn adtfree(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_adtfree")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn emitting_without_a_solver() {
    let dir = tempfile::tempdir().unwrap();
    let smt = dir.path().join("out.smt2");
    let trace = dir.path().join("trace.txt");
    let input = problem_path("reverse.chc");
    let (code, out) = adtfree(&[
        "--input",
        input.to_str().unwrap(),
        "--emit-smtlib",
        smt.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out, "unknown: no solver configured\n");
    assert_eq!(code, 2);
    let script = std::fs::read_to_string(smt).unwrap();
    assert!(script.starts_with("(set-logic HORN)"));
    assert!(script.contains("(declare-fun diff (Int Int Int) Bool)"));
    let trace = std::fs::read_to_string(trace).unwrap();
    assert!(trace.contains("# ledger"));
}

#[test]
fn bad_flags_exit_with_one() {
    assert_eq!(adtfree(&["--frobnicate"]).0, 1);
    assert_eq!(adtfree(&[]).0, 1);
    assert_eq!(adtfree(&["--input", "/nonexistent/x.chc"]).0, 1);
}

#[test]
fn decisions_from_the_command_line() {
    let Some(cmd) = solver_command() else { return };
    let rev = problem_path("reverse.chc");
    let star = problem_path("reverse_star.chc");
    assert_eq!(adtfree(&["--input", rev.to_str().unwrap(), "--solver", &cmd]), (0, "sat\n".into()));
    assert_eq!(adtfree(&["--input", star.to_str().unwrap(), "--solver", &cmd]), (0, "unsat\n".into()));
    let (code, out) = adtfree(&["--input", rev.to_str().unwrap(), "--no-diff", "--max-iterations", "10"]);
    assert_eq!((code, out.as_str()), (2, "unknown: transformation did not terminate\n"));
}

#[test]
fn batch_summary_adds_up() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["reverse.chc", "reverse_star.chc"] {
        std::fs::copy(problem_path(name), dir.path().join(name)).unwrap();
    }
    std::fs::write(dir.path().join("broken.chc"), "p(").unwrap();
    let (code, out) = adtfree(&["--batch", dir.path().to_str().unwrap(), "--workers", "2", "--max-iterations", "10"]);
    assert_eq!(code, 0);
    let (rows, summary) = out.split_once("\n\n").unwrap();
    let rows: Vec<Vec<&str>> = rows.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.len() == 6));
    let count = |p: &str| rows.iter().filter(|r| r[1].starts_with(p)).count();
    let total: Vec<usize> = summary
        .lines()
        .find(|l| l.starts_with("total"))
        .unwrap()
        .split('\t')
        .skip(1)
        .map(|x| x.parse().unwrap())
        .collect();
    // problems, solved, sat, unsat, unknown, errors
    assert_eq!(total[0], rows.len());
    assert_eq!(total[2], count("sat"));
    assert_eq!(total[3], count("unsat"));
    assert_eq!(total[4], count("unknown"));
    assert_eq!(total[5], count("error"));
    assert_eq!(total[2] + total[3] + total[4] + total[5], total[0]);
    assert_eq!(total[5], 1);
}
