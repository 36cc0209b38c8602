//! Command-line driver.
//!
//! Single-problem mode prints exactly one line, `sat`, `unsat` or
//! `unknown: <reason>`, and exits with 0, 0 or 2 respectively (1 on errors).
//! Batch mode runs every `*.chc` file of a directory in parallel and prints a
//! TSV table followed by a summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::Parser;
use rayon::prelude::*;
use thiserror::Error;

use crate::algorithm::Config;
use crate::frontend::{parse_problem_file, FrontendError};
use crate::solver::{decide, emit_smtlib, DecideReport, Decision, ExternalSolver, HornSolver};

#[derive(Debug, Parser)]
#[command(name = "adtfree", version, about = "Remove ADTs from constrained Horn clauses and decide them")]
pub struct Args {
    /// Problem file.
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    pub input: Option<PathBuf>,
    /// Horn solver command; `{file}` is replaced by the script path,
    /// otherwise the script goes to standard input.
    #[arg(long)]
    pub solver: Option<String>,
    /// Per-call solver timeout, in seconds.
    #[arg(long, default_value_t = 300)]
    pub timeout: u64,
    #[arg(long, default_value_t = 100)]
    pub max_iterations: usize,
    /// Write the transformed clauses as an SMT-LIB HORN script.
    #[arg(long, value_name = "FILE")]
    pub emit_smtlib: Option<PathBuf>,
    /// Never introduce difference predicates.
    #[arg(long)]
    pub no_diff: bool,
    /// Dump the derivation ledger, definitions and level constraints.
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,
    /// Run every `.chc` file in a directory.
    #[arg(long, value_name = "DIR")]
    pub batch: Option<PathBuf>,
    /// Batch worker threads (default: one per processor).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: FrontendError },
    #[error("cannot emit SMT-LIB: {0}")]
    Emit(String),
    #[error("worker pool: {0}")]
    Pool(String),
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

impl Args {
    fn config(&self) -> Config {
        Config {
            max_iterations: self.max_iterations,
            no_diff: self.no_diff,
            ..Config::default()
        }
    }

    fn solver(&self) -> Option<ExternalSolver> {
        self.solver
            .as_ref()
            .map(|cmd| ExternalSolver::new(cmd.clone(), Duration::from_secs(self.timeout)))
    }
}

/// Runs the driver on `args` (including the program name) and returns the
/// process exit status.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let result = match &args.batch {
        Some(dir) => run_batch(&args, dir).map(|table| {
            print!("{table}");
            0
        }),
        None => run_single(&args, args.input.as_deref().unwrap()),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        1
    })
}

fn run_single(args: &Args, path: &Path) -> Result<i32, CliError> {
    let src = std::fs::read_to_string(path).map_err(io(path))?;
    let pf = parse_problem_file(&src).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })?;
    let solver = args.solver();
    let report = decide(&pf.problem, &args.config(), solver.as_ref().map(|s| s as &dyn HornSolver));
    if let Some(out) = &args.emit_smtlib {
        match &report.transformed {
            Some(t) => {
                let script = emit_smtlib(&t.output).map_err(|e| CliError::Emit(e.to_string()))?;
                std::fs::write(out, script).map_err(io(out))?;
            }
            None => eprintln!("note: nothing written to {}: no transformed clauses", out.display()),
        }
    }
    if let Some(out) = &args.trace {
        std::fs::write(out, trace(&report)).map_err(io(out))?;
    }
    println!("{}", report.decision);
    Ok(exit_code(&report.decision))
}

fn exit_code(d: &Decision) -> i32 {
    match d {
        Decision::Sat | Decision::Unsat => 0,
        Decision::Unknown(_) => 2,
    }
}

fn trace(r: &DecideReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "decision: {}", r.decision);
    let _ = writeln!(s, "iterations: {}", r.iterations);
    if let Some(v) = &r.verdict {
        let _ = writeln!(s, "solver: {v}");
    }
    if let Some(f1) = &r.f1 {
        let _ = writeln!(s, "functionality: {f1:?}");
    }
    if let Some(t) = &r.transformed {
        let _ = writeln!(s, "\n# definitions");
        for d in &t.defs {
            let _ = writeln!(s, "{:?} {}", d.kind, d.clause);
        }
        let _ = writeln!(s, "\n# ledger\n{}", t.ledger);
        let _ = writeln!(s, "\n# levels\n{}", t.levels);
    }
    s
}

/// One row of the batch table.
#[derive(Debug, Clone)]
pub struct BatchRow {
    pub problem: String,
    pub expect: Option<String>,
    /// `None` when the file could not be read or parsed.
    pub decision: Option<Decision>,
    pub error: Option<String>,
    pub ms: u128,
    pub iterations: usize,
    pub defs: usize,
    pub marked: usize,
}

impl BatchRow {
    fn verdict(&self) -> String {
        match (&self.decision, &self.error) {
            (Some(d), _) => d.to_string(),
            (None, Some(e)) => format!("error: {e}"),
            (None, None) => "error".into(),
        }
    }
}

fn problem_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "chc"))
        .collect();
    files.sort();
    Ok(files)
}

fn batch_row(args: &Args, solver: Option<&dyn HornSolver>, path: &Path) -> BatchRow {
    let start = Instant::now();
    let problem = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
    let mut row = BatchRow {
        problem,
        expect: None,
        decision: None,
        error: None,
        ms: 0,
        iterations: 0,
        defs: 0,
        marked: 0,
    };
    let pf = match std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|s| parse_problem_file(&s).map_err(|e| e.to_string()))
    {
        Ok(pf) => pf,
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    };
    row.expect = pf.expect;
    let r = decide(&pf.problem, &args.config(), solver);
    row.ms = start.elapsed().as_millis();
    row.iterations = r.iterations;
    row.defs = r.defs;
    row.marked = r.transformed.as_ref().map_or(0, |t| t.marked_outputs().len());
    row.decision = Some(r.decision);
    row
}

/// Decides every problem of `dir`; rows come back in file-name order.
pub fn batch(args: &Args, dir: &Path) -> Result<Vec<BatchRow>, CliError> {
    let files = problem_files(dir)?;
    let solver = args.solver();
    let solver = solver.as_ref().map(|s| s as &dyn HornSolver);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    Ok(pool.install(|| files.par_iter().map(|p| batch_row(args, solver, p)).collect()))
}

fn run_batch(args: &Args, dir: &Path) -> Result<String, CliError> {
    Ok(render_table(&batch(args, dir)?))
}

/// Verdict counts per property type: problems, sat, unsat, unknown, errors,
/// and how many agree with the announced expectation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub problems: usize,
    pub sat: usize,
    pub unsat: usize,
    pub unknown: usize,
    pub errors: usize,
    pub solved: usize,
}

impl Tally {
    fn add(&mut self, r: &BatchRow) {
        self.problems += 1;
        match &r.decision {
            Some(Decision::Sat) => self.sat += 1,
            Some(Decision::Unsat) => self.unsat += 1,
            Some(Decision::Unknown(_)) => self.unknown += 1,
            None => self.errors += 1,
        }
        let agrees = matches!(
            (&r.decision, r.expect.as_deref()),
            (Some(Decision::Sat), Some("sat")) | (Some(Decision::Unsat), Some("unsat"))
        );
        self.solved += usize::from(agrees);
    }
}

/// Tallies for valid (`expect: sat`), invalid (`expect: unsat`) and
/// unannotated problems, then the total.
pub fn summarize(rows: &[BatchRow]) -> [(&'static str, Tally); 4] {
    let mut t = [("valid", Tally::default()), ("invalid", Tally::default()), ("other", Tally::default()), ("total", Tally::default())];
    for r in rows {
        let k = match r.expect.as_deref() {
            Some("sat") => 0,
            Some("unsat") => 1,
            _ => 2,
        };
        t[k].1.add(r);
        t[3].1.add(r);
    }
    t
}

pub fn render_table(rows: &[BatchRow]) -> String {
    let mut s = String::from("problem\tverdict\tms\titerations\tdefs\tmarked\n");
    for r in rows {
        let _ = writeln!(s, "{}\t{}\t{}\t{}\t{}\t{}", r.problem, r.verdict(), r.ms, r.iterations, r.defs, r.marked);
    }
    s.push_str("\ntype\tproblems\tsolved\tsat\tunsat\tunknown\terrors\n");
    for (name, t) in summarize(rows) {
        let _ = writeln!(s, "{name}\t{}\t{}\t{}\t{}\t{}\t{}", t.problems, t.solved, t.sat, t.unsat, t.unknown, t.errors);
    }
    s
}
