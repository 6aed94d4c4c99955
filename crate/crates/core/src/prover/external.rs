//! External ATP harness speaking the SZS result protocol.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use super::{HarnessError, Prover, Status, TestVerdict, UnknownReason};
use crate::fol::Formula;
use crate::tptp::{render_problem, AxiomId, Ontology};

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalConfig {
    /// Whitespace-separated command; `{problem}` and `{seconds}` are
    /// substituted in each word. No shell is involved.
    pub command: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalProver {
    pub template: String,
}

impl Prover for ExternalProver {
    fn id(&self) -> String {
        format!("exec:{}", self.template)
    }

    fn prove(&self, premises: &Ontology, conjecture: &Formula, seconds: f64) -> Result<TestVerdict, HarnessError> {
        external_prove(premises, conjecture, &ExternalConfig { command: self.template.clone(), seconds })
    }
}

fn program(template: &str) -> Result<&str, HarnessError> {
    template.split_whitespace().next().ok_or(HarnessError::EmptyCommand)
}

fn find_binary(name: &str) -> Option<PathBuf> {
    if name.contains('/') {
        let p = Path::new(name);
        return p.is_file().then(|| p.to_path_buf());
    }
    std::env::var_os("PATH").and_then(|paths| {
        std::env::split_paths(&paths)
            .map(|dir| dir.join(name))
            .find(|p| p.is_file())
    })
}

/// Fails when the command's program cannot be found.
pub fn preflight(template: &str) -> Result<(), HarnessError> {
    let prog = program(template)?;
    find_binary(prog).map(|_| ()).ok_or_else(|| HarnessError::MissingBinary(prog.to_string()))
}

/// The last `SZS status <word>` on any line of `output`.
pub fn szs_status(output: &str) -> Option<&str> {
    output
        .lines()
        .filter_map(|line| {
            let at = line.find("SZS status ")?;
            line[at + "SZS status ".len()..].split_whitespace().next()
        })
        .next_back()
}

/// Maps an SZS status word to a verdict status; `None` for words outside
/// the supported set.
pub fn map_status(word: &str) -> Option<Status> {
    Some(match word {
        "Theorem" | "Unsatisfiable" | "ContradictoryAxioms" => Status::Proved,
        "CounterSatisfiable" | "Satisfiable" | "GaveUp" | "Unknown" => Status::Unknown(UnknownReason::Saturated),
        "Timeout" => Status::Unknown(UnknownReason::Timeout),
        "ResourceOut" | "MemoryOut" => Status::Unknown(UnknownReason::ResourceLimit),
        _ => return None,
    })
}

/// Premise names cited by a TSTP derivation, via `file(_, name)` or
/// `[input name]` annotations, mapped back to axiom ids.
pub fn used_axioms(output: &str, premises: &Ontology) -> Vec<AxiomId> {
    let mut names: Vec<String> = Vec::new();
    for line in output.lines() {
        let mut rest = line;
        while let Some(at) = rest.find("file(") {
            rest = &rest[at + 5..];
            if let Some(close) = rest.find(')') {
                if let Some(comma) = rest[..close].rfind(',') {
                    names.push(rest[comma + 1..close].trim().trim_matches('\'').to_string());
                }
            }
        }
        let mut rest = line;
        while let Some(at) = rest.find("[input ") {
            rest = &rest[at + 7..];
            if let Some(close) = rest.find(']') {
                names.push(rest[..close].trim().trim_matches('\'').to_string());
            }
        }
    }
    let mut ids: Vec<AxiomId> = names.iter().filter_map(|n| premises.by_name(n)).map(|a| a.id).collect();
    ids.sort();
    ids.dedup();
    ids
}

static PROBLEM_COUNTER: AtomicUsize = AtomicUsize::new(0);

/// Renders the problem to a temporary file, runs the command with a hard
/// kill at `seconds`, and interprets its SZS status.
pub fn external_prove(premises: &Ontology, conjecture: &Formula, config: &ExternalConfig) -> Result<TestVerdict, HarnessError> {
    let prog = program(&config.command)?;
    let binary = find_binary(prog).ok_or_else(|| HarnessError::MissingBinary(prog.to_string()))?;
    let file = std::env::temp_dir().join(format!(
        "ontotest-{}-{}.p",
        std::process::id(),
        PROBLEM_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::write(&file, render_problem(premises, conjecture)).map_err(|e| HarnessError::Io(e.to_string()))?;
    let result = run(&binary, premises, config, &file);
    let _ = std::fs::remove_file(&file);
    result
}

fn run(binary: &Path, premises: &Ontology, config: &ExternalConfig, file: &Path) -> Result<TestVerdict, HarnessError> {
    let seconds_arg = (config.seconds.ceil().max(1.0) as u64).to_string();
    let problem_arg = file.to_string_lossy().into_owned();
    let args: Vec<String> = config
        .command
        .split_whitespace()
        .skip(1)
        .map(|w| w.replace("{problem}", &problem_arg).replace("{seconds}", &seconds_arg))
        .collect();

    let started = Instant::now();
    let mut child = Command::new(binary)
        .args(&args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| HarnessError::Launch { command: config.command.clone(), reason: e.to_string() })?;

    let mut stdout = child.stdout.take().expect("stdout is piped");
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stdout.read_to_end(&mut buf);
        let _ = tx.send(String::from_utf8_lossy(&buf).into_owned());
    });

    let limit = Duration::from_secs_f64(config.seconds.max(0.0));
    let mut killed = false;
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) if started.elapsed() >= limit => {
                let _ = child.kill();
                let _ = child.wait();
                killed = true;
                break;
            }
            Ok(None) => thread::sleep(Duration::from_millis(5)),
            Err(e) => return Err(HarnessError::Io(e.to_string())),
        }
    }
    let seconds = started.elapsed().as_secs_f64();
    // Grandchildren may hold the pipe open after a kill.
    let output = rx.recv_timeout(Duration::from_secs(1)).unwrap_or_default();

    let status = match szs_status(&output) {
        Some(word) => map_status(word).ok_or_else(|| HarnessError::Unparseable(format!("SZS status {word}")))?,
        None if killed => Status::Unknown(UnknownReason::Timeout),
        None => {
            let tail: String = output.lines().rev().take(3).collect::<Vec<_>>().join(" / ");
            return Err(HarnessError::Unparseable(tail));
        }
    };
    let used = if status == Status::Proved { used_axioms(&output, premises) } else { Vec::new() };
    Ok(TestVerdict {
        status,
        seconds,
        prover: format!("exec:{}", config.command),
        used_axioms: used,
        trace: None,
    })
}
