use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{parse_output, HornSolver, SolverVerdict};

/// A solver run as a shell command. `{file}` in the template is replaced by
/// the path of a temporary file holding the script; without the
/// placeholder the script is written to the command's standard input.
#[derive(Debug, Clone)]
pub struct ExternalSolver {
    pub template: String,
    pub timeout: Duration,
}

impl ExternalSolver {
    pub fn new(template: impl Into<String>, timeout: Duration) -> Self {
        ExternalSolver {
            template: template.into(),
            timeout,
        }
    }
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

impl HornSolver for ExternalSolver {
    fn solve(&self, script: &str) -> SolverVerdict {
        let file = match tempfile::Builder::new().suffix(".smt2").tempfile() {
            Ok(f) => f,
            Err(e) => return SolverVerdict::Error(format!("temporary file: {e}")),
        };
        if let Err(e) = std::fs::write(file.path(), script) {
            return SolverVerdict::Error(format!("temporary file: {e}"));
        }
        let path = file.path().to_string_lossy().into_owned();
        let uses_file = self.template.contains("{file}");
        let cmd = self.template.replace("{file}", &shell_quote(&path));
        let mut child = match Command::new("sh")
            .arg("-c")
            .arg(format!("exec {cmd}"))
            .stdin(if uses_file { Stdio::null() } else { Stdio::piped() })
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
        {
            Ok(c) => c,
            Err(e) => return SolverVerdict::Error(format!("cannot start `{cmd}`: {e}")),
        };
        if let Some(mut stdin) = child.stdin.take() {
            let script = script.to_owned();
            thread::spawn(move || {
                let _ = stdin.write_all(script.as_bytes());
            });
        }
        let mut stdout = child.stdout.take().unwrap();
        let reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stdout.read_to_string(&mut s);
            s
        });
        let mut stderr = child.stderr.take().unwrap();
        let err_reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });
        let start = Instant::now();
        let status = loop {
            match child.try_wait() {
                Ok(Some(st)) => break Some(st),
                Ok(None) if start.elapsed() >= self.timeout => {
                    let _ = child.kill();
                    let _ = child.wait();
                    break None;
                }
                Ok(None) => thread::sleep(Duration::from_millis(5)),
                Err(e) => return SolverVerdict::Error(format!("waiting for solver: {e}")),
            }
        };
        let out = reader.join().unwrap_or_default();
        let err = err_reader.join().unwrap_or_default();
        match status {
            None => SolverVerdict::Timeout,
            Some(_) => match parse_output(&out) {
                SolverVerdict::Error(_) if !err.trim().is_empty() => SolverVerdict::Error(err.trim().to_string()),
                v => v,
            },
        }
    }
}
