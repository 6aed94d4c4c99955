//! Python bindings. Structured results cross the boundary as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::json;

use ontotest::campaign::{run_campaign as run, CampaignConfig};
use ontotest::normal;
use ontotest::oracle::distinguishing_model;
use ontotest::prover::{self, Limits, ProverSpec};
use ontotest::testgen::{generate_suite, SuiteRecord, TestKind};
use ontotest::tptp::{parse_formula, parse_ontology, Ontology};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ontology(text: &str, name: &str) -> PyResult<Ontology> {
    parse_ontology(text, name).map_err(value_error)
}

/// Rectified arrow-free negation normal form of a TPTP formula.
#[pyfunction]
fn normalize(formula: &str) -> PyResult<String> {
    Ok(normal::normalize(&parse_formula(formula).map_err(value_error)?).to_string())
}

/// Bound variables renamed to V1, V2, ... in binder order.
#[pyfunction]
fn canonical_form(formula: &str) -> PyResult<String> {
    Ok(parse_formula(formula).map_err(value_error)?.canonical_form().to_string())
}

/// Falsity- and truth-test suites of a TPTP ontology as JSON.
#[pyfunction]
#[pyo3(signature = (text, name = "ontology"))]
fn generate(text: &str, name: &str) -> PyResult<String> {
    let suites = generate_suite(&ontology(text, name)?).map_err(value_error)?;
    let records = |s: &ontotest::testgen::TestSuite| s.tests.iter().map(SuiteRecord::from).collect::<Vec<_>>();
    Ok(json!({
        "raw_falsity": suites.falsity.raw_count,
        "tested_axioms": suites.tested_axioms,
        "falsity": records(&suites.falsity),
        "truth": records(&suites.truth),
    })
    .to_string())
}

/// Internal prover verdict for `conjecture` against the ontology, as JSON.
#[pyfunction]
#[pyo3(signature = (text, conjecture, seconds = prover::DEFAULT_SECONDS))]
fn entails(text: &str, conjecture: &str, seconds: f64) -> PyResult<String> {
    let ont = ontology(text, "premises")?;
    let conj = parse_formula(conjecture).map_err(value_error)?;
    let verdict = prover::entails(&ont, &conj, &Limits { seconds, ..Limits::default() });
    serde_json::to_string(&verdict).map_err(value_error)
}

/// `None` when the formulas agree on every model up to `max_domain`,
/// otherwise a printed distinguishing interpretation.
#[pyfunction]
#[pyo3(signature = (lhs, rhs, max_domain = 3))]
fn check_equiv(lhs: &str, rhs: &str, max_domain: usize) -> PyResult<Option<String>> {
    let l = parse_formula(lhs).map_err(value_error)?;
    let r = parse_formula(rhs).map_err(value_error)?;
    let model = distinguishing_model(&l, &r, None, max_domain).map_err(value_error)?;
    Ok(model.map(|m| m.to_string()))
}

/// Full campaign report as JSON. `provers` entries are `internal` or
/// `exec:<command>`; `kinds` holds `falsity` and/or `truth`.
#[pyfunction]
#[pyo3(signature = (text, name = "ontology", seconds = prover::DEFAULT_SECONDS, provers = vec!["internal".to_string()], kinds = vec!["falsity".to_string(), "truth".to_string()]))]
fn run_campaign(text: &str, name: &str, seconds: f64, provers: Vec<String>, kinds: Vec<String>) -> PyResult<String> {
    let ont = ontology(text, name)?;
    let provers = provers
        .iter()
        .map(|p| p.parse::<ProverSpec>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_error)?;
    let kinds = kinds
        .iter()
        .map(|k| match k.as_str() {
            "falsity" => Ok(TestKind::Falsity),
            "truth" => Ok(TestKind::Truth),
            other => Err(value_error(format!("unknown test kind `{other}`"))),
        })
        .collect::<PyResult<_>>()?;
    let config = CampaignConfig { provers, seconds, kinds, ..CampaignConfig::default() };
    Ok(run(&ont, &config).map_err(value_error)?.to_json())
}

#[pymodule]
fn pyontotest(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_form, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(entails, m)?)?;
    m.add_function(wrap_pyfunction!(check_equiv, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    Ok(())
}
