//! The external prover harness driven by stand-in shell scripts.

mod common;

use std::fs;
use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ontotest::campaign::{run_campaign, CampaignConfig, Grade, TestStatus};
use ontotest::prover::{external_prove, ExternalConfig, HarnessError, ProverSpec, Status, UnknownReason};
use ontotest::testgen::TestKind;
use ontotest::tptp::{parse_formula, AxiomId};

fn script(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, format!("#!/bin/sh\n{body}\n")).unwrap();
    fs::set_permissions(&p, fs::Permissions::from_mode(0o755)).unwrap();
    p
}

fn prove(command: String, seconds: f64) -> Result<ontotest::prover::TestVerdict, HarnessError> {
    let ont = common::ontology("toy.p");
    let conj = parse_formula("![X,Y]: (~p(X) | ~q(X,Y))").unwrap();
    external_prove(&ont, &conj, &ExternalConfig { command, seconds })
}

#[test]
fn theorem_with_cited_premises() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(
        dir.path(),
        "theorem.sh",
        "grep -q conjecture \"$1\" || exit 3\n\
         echo \"% SZS status Theorem for problem\"\n\
         echo \"fof(1, axiom, p, file('$1', phi1)).\"\n\
         echo \"fof(2, axiom, q, file('$1', phi2)).\"\n\
         echo \"cnf(3, plain, r, [input phi1]).\"",
    );
    let v = prove(format!("{} {{problem}} {{seconds}}", s.display()), 5.0).unwrap();
    assert_eq!(v.status, Status::Proved);
    assert_eq!(v.used_axioms, vec![AxiomId(1), AxiomId(2)]);
    assert!(v.prover.starts_with("exec:"));
}

#[test]
fn status_words_map_to_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    for (word, expected) in [
        ("CounterSatisfiable", Status::Unknown(UnknownReason::Saturated)),
        ("GaveUp", Status::Unknown(UnknownReason::Saturated)),
        ("Timeout", Status::Unknown(UnknownReason::Timeout)),
        ("ResourceOut", Status::Unknown(UnknownReason::ResourceLimit)),
        ("Unsatisfiable", Status::Proved),
    ] {
        let s = script(dir.path(), &format!("{word}.sh"), &format!("echo '% SZS status {word} for x'"));
        let v = prove(s.display().to_string(), 5.0).unwrap();
        assert_eq!(v.status, expected, "{word}");
    }
}

#[test]
fn hung_prover_is_killed() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(dir.path(), "sleep.sh", "exec sleep 30");
    let start = Instant::now();
    let v = prove(s.display().to_string(), 1.0).unwrap();
    assert_eq!(v.status, Status::Unknown(UnknownReason::Timeout));
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn harness_failures_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(dir.path(), "chatty.sh", "echo hello");
    assert!(matches!(prove(s.display().to_string(), 5.0), Err(HarnessError::Unparseable(_))));
    let s = script(dir.path(), "weird.sh", "echo '% SZS status Bogus'");
    assert!(matches!(prove(s.display().to_string(), 5.0), Err(HarnessError::Unparseable(_))));
    assert!(matches!(prove("/no/such/atp {problem}".into(), 5.0), Err(HarnessError::MissingBinary(_))));
    assert!(matches!(prove("   ".into(), 5.0), Err(HarnessError::EmptyCommand)));
}

#[test]
fn campaign_merges_external_and_internal() {
    let dir = tempfile::tempdir().unwrap();
    let never = script(dir.path(), "never.sh", "echo '% SZS status CounterSatisfiable'");
    let ont = common::ontology("toy.p");
    let config = CampaignConfig {
        provers: vec![ProverSpec::Exec(format!("{} {{problem}}", never.display())), ProverSpec::Internal],
        seconds: 2.0,
        kinds: [TestKind::Falsity].into(),
        ..CampaignConfig::default()
    };
    let report = run_campaign(&ont, &config).unwrap();
    assert_eq!(report.provers.len(), 2);
    let f1 = report.tests.iter().find(|t| t.id.0 == "F1").unwrap();
    assert_eq!(f1.status, TestStatus::Proved);
    assert_eq!(f1.runs.len(), 2);
    assert_eq!(report.axioms[0].grade, Grade::Defective);
}

#[test]
fn campaign_reports_harness_errors() {
    let dir = tempfile::tempdir().unwrap();
    let broken = script(dir.path(), "broken.sh", "echo nothing useful");
    let ont = common::ontology("toy.p");
    let config = CampaignConfig {
        provers: vec![ProverSpec::Exec(broken.display().to_string())],
        seconds: 2.0,
        ..CampaignConfig::default()
    };
    let report = run_campaign(&ont, &config).unwrap();
    assert_eq!(report.total.harness_errors, report.tests.len());
    assert!(report.tests.iter().all(|t| matches!(t.status, TestStatus::HarnessError(_))));
    assert!(!report.defects_found());
    assert!(report.to_text().contains("harness errors: 18"));
}
