//! Test campaigns: generate suites, prove every test against the whole
//! ontology, grade axioms and summarize.

pub mod report;
pub mod store;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localize::{localize, simplify, Simplification};
use crate::prover::{HarnessError, InternalProver, Prover, ProverSpec, Status, TestVerdict, UnknownReason, DEFAULT_MAX_CLAUSES, DEFAULT_SECONDS};
use crate::testgen::{generate_suite, GeneratedSuites, Polarity, TestCase, TestId, TestKind, TestgenError};
use crate::tptp::{AxiomId, Ontology};

pub use report::{coverage, time_buckets, CampaignReport, Coverage, GradeCounts, SuiteSummary, TimeBuckets};

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub provers: Vec<ProverSpec>,
    /// Per-test wall-clock limit in seconds.
    pub seconds: f64,
    /// Clause cap for the internal prover.
    pub max_clauses: usize,
    pub workers: usize,
    pub kinds: BTreeSet<TestKind>,
    /// Verdict cache; finished attempts recorded here are not re-run.
    pub store: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            provers: vec![ProverSpec::Internal],
            seconds: DEFAULT_SECONDS,
            max_clauses: DEFAULT_MAX_CLAUSES,
            workers: thread::available_parallelism().map_or(1, |n| n.get()),
            kinds: [TestKind::Falsity, TestKind::Truth].into(),
            store: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error(transparent)]
    Testgen(#[from] TestgenError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("verdict store: {0}")]
    Store(#[from] std::io::Error),
    #[error("axiom {axiom}: no verdict for test {test}")]
    MissingVerdict { axiom: AxiomId, test: TestId },
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grade {
    Defective,
    CompletelySuitable,
    PartiallySuitable,
    Unsuitable,
    /// No disjunction in the af-nnf form, hence no tests.
    Untested,
    /// No falsity-test proved and truth-tests not run.
    NotDefective,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: AxiomId,
    pub name: String,
    pub grade: Grade,
    /// Proved falsity-tests for a defective axiom, proved truth-tests otherwise.
    pub supporting: Vec<TestId>,
}

/// Status of one test after merging all provers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "kebab-case")]
pub enum TestStatus {
    Proved,
    Unknown(UnknownReason),
    HarnessError(String),
}

impl TestStatus {
    pub fn is_proved(&self) -> bool {
        *self == TestStatus::Proved
    }
}

/// One prover's attempt on one test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProverRun {
    pub prover: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<TestVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Taken from the verdict store rather than re-run.
    pub cached: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub id: TestId,
    pub kind: TestKind,
    pub conjecture: String,
    pub origins: Vec<AxiomId>,
    #[serde(flatten)]
    pub status: TestStatus,
    /// Fastest proof time if proved, else the longest attempt.
    pub seconds: f64,
    /// Union over the provers that proved the test.
    pub used_axioms: Vec<AxiomId>,
    pub runs: Vec<ProverRun>,
}

/// Proved if any prover proves; otherwise the first prover's verdict;
/// harness error only when no prover produced a verdict.
pub fn merge_runs(test: &TestCase, runs: Vec<ProverRun>) -> TestOutcome {
    let verdicts: Vec<&TestVerdict> = runs.iter().filter_map(|r| r.verdict.as_ref()).collect();
    let proofs: Vec<&&TestVerdict> = verdicts.iter().filter(|v| v.is_proved()).collect();
    let (status, seconds, used) = if !proofs.is_empty() {
        let used: BTreeSet<AxiomId> = proofs.iter().flat_map(|v| v.used_axioms.iter().copied()).collect();
        let fastest = proofs.iter().map(|v| v.seconds).fold(f64::INFINITY, f64::min);
        (TestStatus::Proved, fastest, used.into_iter().collect())
    } else if let Some(v) = verdicts.first() {
        let reason = match v.status {
            Status::Unknown(r) => r,
            Status::Proved => unreachable!(),
        };
        let longest = verdicts.iter().map(|v| v.seconds).fold(0.0, f64::max);
        (TestStatus::Unknown(reason), longest, Vec::new())
    } else {
        let msg = runs.iter().find_map(|r| r.error.clone()).unwrap_or_default();
        (TestStatus::HarnessError(msg), 0.0, Vec::new())
    };
    TestOutcome {
        id: test.id.clone(),
        kind: test.kind,
        conjecture: test.conjecture.to_string(),
        origins: test.origin_axioms(),
        status,
        seconds,
        used_axioms: used,
        runs,
    }
}

/// Grades one axiom from the outcomes of the tests that name it as an origin.
///
/// `falsity` and `truth` are `None` when that kind was not run.
pub fn classify_axiom(
    axiom: AxiomId,
    name: &str,
    testable: bool,
    falsity: Option<&[&TestOutcome]>,
    truth: Option<&[&TestOutcome]>,
) -> AxiomVerdict {
    let verdict = |grade, supporting| AxiomVerdict { axiom, name: name.to_string(), grade, supporting };
    if !testable {
        return verdict(Grade::Untested, Vec::new());
    }
    let proved = |tests: &[&TestOutcome]| -> Vec<TestId> {
        tests.iter().filter(|t| t.status.is_proved()).map(|t| t.id.clone()).collect()
    };
    if let Some(f) = falsity {
        let p = proved(f);
        if !p.is_empty() {
            return verdict(Grade::Defective, p);
        }
    }
    match truth {
        None => verdict(Grade::NotDefective, Vec::new()),
        Some(t) => {
            let p = proved(t);
            let grade = if p.is_empty() {
                Grade::Unsuitable
            } else if p.len() == t.len() {
                Grade::CompletelySuitable
            } else {
                Grade::PartiallySuitable
            };
            verdict(grade, p)
        }
    }
}

/// Localization of a proved falsity-test with respect to one of its origins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizationEntry {
    pub test: TestId,
    pub axiom: AxiomId,
    pub path: Vec<usize>,
    pub polarity: Polarity,
    pub simplification: Simplification,
    pub delta: String,
    pub gamma: String,
    pub psi: String,
    /// The axiom with the associated disjunction replaced by its surviving side.
    pub simplified: String,
}

fn localizations(suites: &GeneratedSuites, outcomes: &[TestOutcome]) -> Vec<LocalizationEntry> {
    let mut out = Vec::new();
    for o in outcomes.iter().filter(|o| o.kind == TestKind::Falsity && o.status.is_proved()) {
        let Some(test) = suites.falsity.get(&o.id) else { continue };
        for prov in &test.provenance {
            let Some(phi) = suites.normalized.get(&prov.axiom) else { continue };
            let Ok(loc) = localize(phi, &prov.path) else { continue };
            let which = match prov.polarity {
                Polarity::Positive => Simplification::KeepDelta,
                Polarity::Negative => Simplification::DropDelta,
            };
            out.push(LocalizationEntry {
                test: o.id.clone(),
                axiom: prov.axiom,
                path: prov.path.clone(),
                polarity: prov.polarity,
                simplification: which,
                delta: loc.delta.to_string(),
                gamma: loc.gamma.to_string(),
                psi: loc.psi.to_string(),
                simplified: simplify(&loc, which).to_string(),
            });
        }
    }
    out
}

struct Job<'a> {
    test: &'a TestCase,
    index: usize,
    prover: usize,
    key: String,
}

/// Runs a full campaign. Verdicts are appended to the configured store as
/// they arrive, and attempts already in the store are reused.
pub fn run_campaign(ontology: &Ontology, config: &CampaignConfig) -> Result<CampaignReport, CampaignError> {
    if config.seconds.is_nan() || config.seconds <= 0.0 {
        return Err(CampaignError::Config("time limit must be positive".into()));
    }
    if config.workers == 0 {
        return Err(CampaignError::Config("worker count must be at least 1".into()));
    }
    if config.provers.is_empty() {
        return Err(CampaignError::Config("no prover configured".into()));
    }
    for p in &config.provers {
        p.preflight()?;
    }
    let provers: Vec<Box<dyn Prover>> = config
        .provers
        .iter()
        .map(|p| match p {
            ProverSpec::Internal => Box::new(InternalProver { max_clauses: config.max_clauses }) as Box<dyn Prover>,
            other => other.build(),
        })
        .collect();
    let prover_ids: Vec<String> = provers.iter().map(|p| p.id()).collect();

    let suites = generate_suite(ontology)?;
    let tests: Vec<&TestCase> = [&suites.falsity, &suites.truth]
        .into_iter()
        .filter(|s| config.kinds.contains(&s.kind))
        .flat_map(|s| s.tests.iter())
        .collect();

    let cache = match &config.store {
        Some(path) => store::load(path)?,
        None => HashMap::new(),
    };
    let mut runs: Vec<Vec<Option<ProverRun>>> = vec![vec![None; provers.len()]; tests.len()];
    let mut jobs = Vec::new();
    for (index, test) in tests.iter().enumerate() {
        for (pi, pid) in prover_ids.iter().enumerate() {
            let key = store::verdict_key(ontology, &test.conjecture, pid, config.seconds);
            match cache.get(&key) {
                Some(v) => {
                    runs[index][pi] = Some(ProverRun { prover: pid.clone(), verdict: Some(v.clone()), error: None, cached: true })
                }
                None => jobs.push(Job { test, index, prover: pi, key }),
            }
        }
    }

    let mut writer = match &config.store {
        Some(path) => Some(store::Writer::open(path)?),
        None => None,
    };
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<TestVerdict, HarnessError>)>();
    let mut store_error = None;
    thread::scope(|scope| {
        for _ in 0..config.workers.min(jobs.len()) {
            let tx = tx.clone();
            let (jobs, next, provers) = (&jobs, &next, &provers);
            scope.spawn(move || loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(j) else { break };
                let result = provers[job.prover].prove(ontology, &job.test.conjecture, config.seconds);
                if tx.send((j, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (j, result) in rx {
            let job = &jobs[j];
            let pid = prover_ids[job.prover].clone();
            let run = match result {
                Ok(v) => {
                    if let Some(w) = writer.as_mut() {
                        let rec = store::VerdictRecord {
                            key: job.key.clone(),
                            id: job.test.id.clone(),
                            kind: job.test.kind,
                            origins: job.test.provenance.clone(),
                            conjecture: job.test.conjecture.to_string(),
                            verdict: v.clone(),
                        };
                        if let Err(e) = w.append(&rec) {
                            store_error.get_or_insert(e);
                        }
                    }
                    ProverRun { prover: pid, verdict: Some(v), error: None, cached: false }
                }
                Err(e) => ProverRun { prover: pid, verdict: None, error: Some(e.to_string()), cached: false },
            };
            runs[job.index][job.prover] = Some(run);
        }
    });
    if let Some(e) = store_error {
        return Err(e.into());
    }

    let outcomes: Vec<TestOutcome> = tests
        .iter()
        .zip(runs)
        .map(|(t, r)| merge_runs(t, r.into_iter().map(|x| x.expect("every job reports")).collect()))
        .collect();
    Ok(assemble(ontology, &suites, config, prover_ids, outcomes))
}

fn assemble(
    ontology: &Ontology,
    suites: &GeneratedSuites,
    config: &CampaignConfig,
    provers: Vec<String>,
    outcomes: Vec<TestOutcome>,
) -> CampaignReport {
    let by_id: BTreeMap<(TestKind, &TestId), &TestOutcome> = outcomes.iter().map(|o| ((o.kind, &o.id), o)).collect();
    let tested: BTreeSet<AxiomId> = suites.tested_axioms.iter().copied().collect();
    let ran_f = config.kinds.contains(&TestKind::Falsity);
    let ran_t = config.kinds.contains(&TestKind::Truth);
    let axioms: Vec<AxiomVerdict> = ontology
        .axioms
        .iter()
        .map(|ax| {
            let of = |suite: &crate::testgen::TestSuite| -> Vec<&TestOutcome> {
                suite.tests_of(ax.id).filter_map(|t| by_id.get(&(t.kind, &t.id)).copied()).collect()
            };
            let f = of(&suites.falsity);
            let t = of(&suites.truth);
            classify_axiom(
                ax.id,
                &ax.name,
                tested.contains(&ax.id),
                ran_f.then_some(f.as_slice()),
                ran_t.then_some(t.as_slice()),
            )
        })
        .collect();

    let proved_truth: BTreeSet<&TestId> = outcomes
        .iter()
        .filter(|o| o.kind == TestKind::Truth && o.status.is_proved())
        .map(|o| &o.id)
        .collect();
    let inconsistent_suspect = suites.falsity.tests.iter().any(|f| {
        by_id.get(&(TestKind::Falsity, &f.id)).is_some_and(|o| o.status.is_proved())
            && f.dual.as_ref().is_some_and(|d| proved_truth.contains(d))
    });

    let localizations = localizations(suites, &outcomes);
    report::build(
        ontology,
        suites,
        config,
        provers,
        axioms,
        outcomes,
        localizations,
        inconsistent_suspect,
    )
}
