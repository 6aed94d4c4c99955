//! Deciding whether an ontology entails a test.
//!
//! Two back ends share one verdict type: a built-in resolution prover and an
//! external ATP run as a subprocess that reports an SZS status line.

pub mod clause;
pub mod clausify;
pub mod external;
pub mod saturate;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::Formula;
use crate::tptp::{AxiomId, Ontology};
use clause::Origin;
use clausify::{ClauseSet, Clausifier};
use saturate::{Outcome, Resource};

pub use external::{external_prove, ExternalConfig};

pub const DEFAULT_SECONDS: f64 = 5.0;
pub const DEFAULT_MAX_CLAUSES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub seconds: f64,
    pub max_clauses: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { seconds: DEFAULT_SECONDS, max_clauses: DEFAULT_MAX_CLAUSES }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownReason {
    Timeout,
    Saturated,
    ResourceLimit,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::Timeout => "timeout",
            UnknownReason::Saturated => "saturated",
            UnknownReason::ResourceLimit => "resource-limit",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "kebab-case")]
pub enum Status {
    Proved,
    Unknown(UnknownReason),
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Proved => f.write_str("proved"),
            Status::Unknown(r) => write!(f, "unknown({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    #[serde(flatten)]
    pub status: Status,
    pub seconds: f64,
    pub prover: String,
    pub used_axioms: Vec<AxiomId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
}

impl TestVerdict {
    pub fn is_proved(&self) -> bool {
        self.status == Status::Proved
    }

    fn unknown(reason: UnknownReason, prover: &str, started: Instant) -> Self {
        TestVerdict {
            status: Status::Unknown(reason),
            seconds: started.elapsed().as_secs_f64(),
            prover: prover.to_string(),
            used_axioms: Vec::new(),
            trace: None,
        }
    }
}

/// Failures of the proving harness itself. These are never verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("prover binary `{0}` not found")]
    MissingBinary(String),
    #[error("empty prover command template")]
    EmptyCommand,
    #[error("cannot launch `{command}`: {reason}")]
    Launch { command: String, reason: String },
    #[error("prover output has no recognizable SZS status: {0}")]
    Unparseable(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// A configured back end.
pub trait Prover: Send + Sync {
    fn id(&self) -> String;
    fn prove(&self, premises: &Ontology, conjecture: &Formula, seconds: f64) -> Result<TestVerdict, HarnessError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InternalProver {
    pub max_clauses: usize,
}

impl Default for InternalProver {
    fn default() -> Self {
        InternalProver { max_clauses: DEFAULT_MAX_CLAUSES }
    }
}

impl Prover for InternalProver {
    fn id(&self) -> String {
        "internal".to_string()
    }

    fn prove(&self, premises: &Ontology, conjecture: &Formula, seconds: f64) -> Result<TestVerdict, HarnessError> {
        Ok(entails(premises, conjecture, &Limits { seconds, max_clauses: self.max_clauses }))
    }
}

/// A prover selection as written on the command line: `internal` or
/// `exec:<command template>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProverSpec {
    Internal,
    Exec(String),
}

impl FromStr for ProverSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "internal" {
            Ok(ProverSpec::Internal)
        } else if let Some(t) = s.strip_prefix("exec:") {
            if t.trim().is_empty() {
                Err("empty command after `exec:`".to_string())
            } else {
                Ok(ProverSpec::Exec(t.to_string()))
            }
        } else {
            Err(format!("unknown prover `{s}`; expected `internal` or `exec:<command>`"))
        }
    }
}

impl fmt::Display for ProverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProverSpec::Internal => f.write_str("internal"),
            ProverSpec::Exec(t) => write!(f, "exec:{t}"),
        }
    }
}

impl ProverSpec {
    pub fn build(&self) -> Box<dyn Prover> {
        match self {
            ProverSpec::Internal => Box::new(InternalProver::default()),
            ProverSpec::Exec(t) => Box::new(external::ExternalProver { template: t.clone() }),
        }
    }

    /// Checks that the configured binary exists.
    pub fn preflight(&self) -> Result<(), HarnessError> {
        match self {
            ProverSpec::Internal => Ok(()),
            ProverSpec::Exec(t) => external::preflight(t),
        }
    }
}

/// Clauses of `premises` plus the negated conjecture, ready for saturation.
pub fn problem_clauses(premises: &Ontology, conjecture: &Formula, max_clauses: usize) -> Result<ClauseSet, clausify::ClausifyError> {
    let negated = crate::normal::rectify(&Formula::not(conjecture.universal_closure()));
    let mut c = Clausifier::new(premises.axioms.iter().map(|a| &a.formula).chain([&negated]), max_clauses);
    let mut clauses = Vec::new();
    for ax in &premises.axioms {
        clauses.extend(c.clausify(&ax.formula, Origin::Axiom(ax.id))?);
    }
    clauses.extend(c.clausify(&negated, Origin::NegatedConjecture)?);
    Ok(ClauseSet { symbols: c.symbols, clauses })
}

/// Runs the internal prover on `premises ⊢ conjecture`.
pub fn entails(premises: &Ontology, conjecture: &Formula, limits: &Limits) -> TestVerdict {
    let started = Instant::now();
    let deadline = started + Duration::from_secs_f64(limits.seconds.max(0.0));
    let id = "internal";
    let set = match problem_clauses(premises, conjecture, limits.max_clauses) {
        Ok(set) => set,
        Err(_) => return TestVerdict::unknown(UnknownReason::ResourceLimit, id, started),
    };
    match saturate::saturate_until(&set, limits, deadline) {
        Outcome::Refutation(proof) => TestVerdict {
            status: Status::Proved,
            seconds: started.elapsed().as_secs_f64(),
            prover: id.to_string(),
            used_axioms: proof.used_axioms,
            trace: Some(proof.trace),
        },
        Outcome::Saturated => TestVerdict::unknown(UnknownReason::Saturated, id, started),
        Outcome::ResourceOut(Resource::Time) => TestVerdict::unknown(UnknownReason::Timeout, id, started),
        Outcome::ResourceOut(Resource::Clauses) => TestVerdict::unknown(UnknownReason::ResourceLimit, id, started),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tptp::{parse_formula, parse_ontology};

    fn toy() -> Ontology {
        parse_ontology(
            "fof(phi1, axiom, ![X,Y]: ((p(X) & q(X,Y)) => r(X))).
             fof(phi2, axiom, ![X]: (p(X) => ~r(X))).
             fof(phi3, axiom, ![X]: ((?[Y]: q(X,Y)) => ~r(X))).",
            "toy",
        )
        .unwrap()
    }

    #[test]
    fn toy_entailment_and_premise_dependence() {
        let conj = parse_formula("![X,Y]: (~p(X) | ~q(X,Y))").unwrap();
        let v = entails(&toy(), &conj, &Limits::default());
        assert!(v.is_proved());
        assert!(v.used_axioms.contains(&AxiomId(1)));
        let v = entails(&toy().without(AxiomId(1)), &conj, &Limits::default());
        assert_eq!(v.status, Status::Unknown(UnknownReason::Saturated));
    }

    #[test]
    fn empty_ontology_does_not_entail_atom() {
        let v = entails(&Ontology::new("empty"), &parse_formula("p(a)").unwrap(), &Limits::default());
        assert_eq!(v.status, Status::Unknown(UnknownReason::Saturated));
    }

    #[test]
    fn reflexivity_test_needs_no_axiom() {
        let ont = parse_ontology(
            "fof(a5, axiom, ![C]: (instance(C, circle) => ?[P]: 'CenterOfCircleFn'(C) = P)).",
            "circle",
        )
        .unwrap();
        let v = entails(&ont, &parse_formula("![C]: ?[P]: 'CenterOfCircleFn'(C) = P").unwrap(), &Limits::default());
        assert!(v.is_proved());
        assert!(v.used_axioms.is_empty());
    }

    #[test]
    fn verdict_json_shape() {
        let v = TestVerdict {
            status: Status::Unknown(UnknownReason::ResourceLimit),
            seconds: 0.5,
            prover: "internal".into(),
            used_axioms: vec![AxiomId(2)],
            trace: None,
        };
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "unknown");
        assert_eq!(json["reason"], "resource-limit");
        assert_eq!(json["used_axioms"][0], 2);
        let back: TestVerdict = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);
        let proved = serde_json::to_value(TestVerdict { status: Status::Proved, ..v }).unwrap();
        assert_eq!(proved["status"], "proved");
    }

    #[test]
    fn prover_spec_parsing() {
        assert_eq!("internal".parse::<ProverSpec>(), Ok(ProverSpec::Internal));
        assert_eq!(
            "exec:vampire --mode casc -t {seconds} {problem}".parse::<ProverSpec>(),
            Ok(ProverSpec::Exec("vampire --mode casc -t {seconds} {problem}".into()))
        );
        assert!("exec:".parse::<ProverSpec>().is_err());
        assert!("vampire".parse::<ProverSpec>().is_err());
    }
}
