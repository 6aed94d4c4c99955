//! Command-line front end.
//!
//! Exit codes: 0 clean, 1 defects found (or formulas not equivalent),
//! 2 operational failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::campaign::{run_campaign, CampaignConfig};
use crate::oracle::{distinguishing_model, MAX_DOMAIN};
use crate::prover::{ProverSpec, DEFAULT_MAX_CLAUSES};
use crate::testgen::{generate_suite, write_suite, TestKind};
use crate::tptp::{load_ontology, parse_statements, render_problem, Ontology};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_DEFECTS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ontotest", version, about = "Falsity/truth test generation and evaluation for FOF ontologies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Falsity,
    Truth,
}

impl From<KindArg> for TestKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Falsity => TestKind::Falsity,
            KindArg::Truth => TestKind::Truth,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate falsity- and truth-test suites and one problem file per test.
    Gen {
        ontology: PathBuf,
        #[arg(long, default_value = "ontotest-out")]
        out: PathBuf,
    },
    /// Prove every test against the whole ontology and grade the axioms.
    Run {
        ontology: PathBuf,
        #[arg(long, default_value = "ontotest-out")]
        out: PathBuf,
        /// Per-test time limit in seconds.
        #[arg(long, default_value_t = 5.0)]
        limit: f64,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// `internal` or `exec:<command>` with `{problem}` and `{seconds}`
        /// placeholders. Repeat to combine provers.
        #[arg(long = "prover", default_value = "internal")]
        provers: Vec<ProverSpec>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![KindArg::Falsity, KindArg::Truth], value_enum)]
        kinds: Vec<KindArg>,
        /// Clause cap for the internal prover.
        #[arg(long, default_value_t = DEFAULT_MAX_CLAUSES)]
        max_clauses: usize,
    },
    /// Compare the first two formulas of a file on all finite models.
    CheckEquiv {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_domain: usize,
        /// Restrict to models of this ontology.
        #[arg(long)]
        premises: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Output goes to the given writers; the return value is the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_CLEAN };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn load(path: &Path) -> Result<Ontology, String> {
    load_ontology(path).map_err(|e| e.to_string())
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, String> {
    match cmd {
        Command::Gen { ontology, out: dir } => {
            let ont = load(&ontology)?;
            let suites = generate_suite(&ont).map_err(|e| e.to_string())?;
            let problems = dir.join("problems");
            fs::create_dir_all(&problems).map_err(|e| format!("{}: {e}", problems.display()))?;
            for suite in [&suites.falsity, &suites.truth] {
                let mut buf = Vec::new();
                write_suite(suite, &mut buf).map_err(|e| e.to_string())?;
                write_file(&dir.join(format!("{}.{}.jsonl", ont.name, suite.kind)), &buf)?;
                for t in &suite.tests {
                    let file = problems.join(format!("{}__{}.p", ont.name, t.id));
                    write_file(&file, render_problem(&ont, &t.conjecture).as_bytes())?;
                }
            }
            let _ = writeln!(out, "{} total / {} unique falsity-tests", suites.falsity.raw_count, suites.falsity.len());
            let _ = writeln!(out, "{} unique truth-tests", suites.truth.len());
            let _ = writeln!(out, "{} tested axioms of {}", suites.tested_axioms.len(), ont.len());
            Ok(EXIT_CLEAN)
        }
        Command::Run { ontology, out: dir, limit, jobs, provers, kinds, max_clauses } => {
            if limit.is_nan() || limit <= 0.0 {
                return Err("--limit must be positive".into());
            }
            if jobs == Some(0) {
                return Err("--jobs must be at least 1".into());
            }
            let ont = load(&ontology)?;
            fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            let defaults = CampaignConfig::default();
            let config = CampaignConfig {
                provers,
                seconds: limit,
                max_clauses,
                workers: jobs.unwrap_or(defaults.workers),
                kinds: kinds.into_iter().map(TestKind::from).collect(),
                store: Some(dir.join(format!("{}.verdicts.jsonl", ont.name))),
            };
            let report = run_campaign(&ont, &config).map_err(|e| e.to_string())?;
            let text = report.to_text();
            write_file(&dir.join(format!("{}.report.txt", ont.name)), text.as_bytes())?;
            write_file(&dir.join(format!("{}.report.json", ont.name)), report.to_json().as_bytes())?;
            let _ = write!(out, "{text}");
            Ok(if report.defects_found() { EXIT_DEFECTS } else { EXIT_CLEAN })
        }
        Command::CheckEquiv { file, max_domain, premises } => {
            if max_domain == 0 || max_domain > MAX_DOMAIN {
                return Err(format!("--max-domain must be in 1..={MAX_DOMAIN}"));
            }
            let text = fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let name = file.display().to_string();
            let stmts = parse_statements(&text, &name).map_err(|e| e.to_string())?;
            let [lhs, rhs] = match stmts.as_slice() {
                [a, b, ..] => [a.formula.universal_closure(), b.formula.universal_closure()],
                _ => return Err(format!("{name}: expected two formulas")),
            };
            let prem: Option<Vec<_>> = match premises {
                Some(p) => Some(load(&p)?.axioms.into_iter().map(|a| a.formula).collect()),
                None => None,
            };
            match distinguishing_model(&lhs, &rhs, prem.as_deref(), max_domain).map_err(|e| e.to_string())? {
                None => {
                    let _ = writeln!(out, "yes: equivalent on all models with domain size 1..={max_domain}");
                    Ok(EXIT_CLEAN)
                }
                Some(m) => {
                    let _ = writeln!(out, "no: distinguishing interpretation");
                    let _ = write!(out, "{m}");
                    Ok(EXIT_DEFECTS)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("ontotest").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&["frobnicate"]).0, EXIT_ERROR);
        assert_eq!(run(&["run", "x.p", "--prover", "vampire"]).0, EXIT_ERROR);
        assert_eq!(run(&["run", "x.p", "--kinds", "maybe"]).0, EXIT_ERROR);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, EXIT_CLEAN);
        assert!(out.contains("check-equiv"));
    }

    #[test]
    fn missing_file_exits_2() {
        let (code, _, err) = run(&["gen", "/no/such/file.p"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("error"));
    }
}
