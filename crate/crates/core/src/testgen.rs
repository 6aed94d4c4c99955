//! Syntax-driven generation of falsity- and truth-tests.
//!
//! Falsity-tests come from walking the af-nnf form of an axiom: conjunctions
//! and quantifiers at the top are descended, and from the first disjunction
//! down every child `δ` of a connective (or body of a quantifier) yields the
//! pair `(δ)^∀`, `(¬δ)^∀`. Truth-tests are their negations.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::Formula;
use crate::normal::{self, is_af_nnf, is_rectified, negate_nnf};
use crate::tptp::{parse_formula, AxiomId, Ontology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Falsity,
    Truth,
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestKind::Falsity => "falsity",
            TestKind::Truth => "truth",
        })
    }
}

/// Which side of the pair a test was built from: `(δ)^∀` or `(¬δ)^∀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TestId(pub String);

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Where a test came from: the axiom, the child-index path from the root of
/// its af-nnf form to `δ`, and the side of the pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Provenance {
    pub axiom: AxiomId,
    pub path: Vec<usize>,
    pub polarity: Polarity,
}

/// A test before duplicate elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTest {
    pub conjecture: Formula,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub id: TestId,
    pub kind: TestKind,
    /// Canonical af-nnf sentence.
    pub conjecture: Formula,
    /// Every origin merged into this test; the first one is the representative.
    pub provenance: Vec<Provenance>,
    /// The opposite-polarity test over the same `δ`.
    pub partner: Option<TestId>,
    /// The test of the other kind related by negation.
    pub dual: Option<TestId>,
}

impl TestCase {
    pub fn origin(&self) -> &Provenance {
        &self.provenance[0]
    }

    pub fn origin_axioms(&self) -> Vec<AxiomId> {
        let mut ids: Vec<AxiomId> = self.provenance.iter().map(|p| p.axiom).collect();
        ids.sort();
        ids.dedup();
        ids
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSuite {
    pub ontology: String,
    pub kind: TestKind,
    /// Number of tests before duplicate elimination.
    pub raw_count: usize,
    pub tests: Vec<TestCase>,
}

impl TestSuite {
    pub fn len(&self) -> usize {
        self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tests.is_empty()
    }

    pub fn get(&self, id: &TestId) -> Option<&TestCase> {
        self.tests.iter().find(|t| &t.id == id)
    }

    /// Canonical conjecture → every provenance record that produced it.
    pub fn merge_map(&self) -> BTreeMap<String, Vec<Provenance>> {
        self.tests
            .iter()
            .map(|t| (t.conjecture.to_string(), t.provenance.clone()))
            .collect()
    }

    /// Tests with `axiom` among their origins.
    pub fn tests_of(&self, axiom: AxiomId) -> impl Iterator<Item = &TestCase> {
        self.tests
            .iter()
            .filter(move |t| t.provenance.iter().any(|p| p.axiom == axiom))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TestgenError {
    #[error("axiom {axiom}: formula is not in arrow-free negation normal form")]
    NotAfNnf { axiom: AxiomId },
    #[error("axiom {axiom}: formula is not rectified")]
    NotRectified { axiom: AxiomId },
}

/// Raw falsity-tests of one af-nnf sentence, duplicates included, in
/// depth-first order with all positive tests of a node before its negatives.
pub fn ft(phi: &Formula, axiom: AxiomId) -> Result<Vec<RawTest>, TestgenError> {
    if !is_af_nnf(phi) {
        return Err(TestgenError::NotAfNnf { axiom });
    }
    if !is_rectified(phi) {
        return Err(TestgenError::NotRectified { axiom });
    }
    let mut out = Vec::new();
    let mut path = Vec::new();
    ft_top(phi, axiom, &mut path, &mut out);
    Ok(out)
}

fn ft_top(phi: &Formula, axiom: AxiomId, path: &mut Vec<usize>, out: &mut Vec<RawTest>) {
    match phi {
        Formula::Or(_) => ft_inner(phi, axiom, path, out),
        Formula::And(children) => {
            for (i, c) in children.iter().enumerate() {
                path.push(i);
                ft_top(c, axiom, path, out);
                path.pop();
            }
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => {
            path.push(0);
            ft_top(body, axiom, path, out);
            path.pop();
        }
        _ => {}
    }
}

fn ft_inner(phi: &Formula, axiom: AxiomId, path: &mut Vec<usize>, out: &mut Vec<RawTest>) {
    let children: Vec<&Formula> = match phi {
        Formula::Or(cs) | Formula::And(cs) => cs.iter().collect(),
        Formula::Forall(_, body) | Formula::Exists(_, body) => vec![body],
        _ => return,
    };
    for polarity in [Polarity::Positive, Polarity::Negative] {
        for (i, c) in children.iter().enumerate() {
            let delta = match polarity {
                Polarity::Positive => (*c).clone(),
                Polarity::Negative => negate_nnf(c),
            };
            path.push(i);
            out.push(RawTest {
                conjecture: delta.universal_closure(),
                provenance: Provenance {
                    axiom,
                    path: path.clone(),
                    polarity,
                },
            });
            path.pop();
        }
    }
    for (i, c) in children.iter().enumerate() {
        path.push(i);
        ft_inner(c, axiom, path, out);
        path.pop();
    }
}

/// Groups raw tests by canonical conjecture, keeping first-seen order and
/// every provenance record. Ids are `F1, F2, ...` (or `T1, ...`).
pub fn dedup(ontology: &str, kind: TestKind, raw: Vec<RawTest>) -> TestSuite {
    let raw_count = raw.len();
    let mut index: BTreeMap<Formula, usize> = BTreeMap::new();
    let mut tests: Vec<TestCase> = Vec::new();
    for r in raw {
        let canon = r.conjecture.canonical_form();
        match index.get(&canon) {
            Some(&i) => {
                if !tests[i].provenance.contains(&r.provenance) {
                    tests[i].provenance.push(r.provenance);
                }
            }
            None => {
                index.insert(canon.clone(), tests.len());
                tests.push(TestCase {
                    id: TestId(format!("{}{}", id_prefix(kind), tests.len() + 1)),
                    kind,
                    conjecture: canon,
                    provenance: vec![r.provenance],
                    partner: None,
                    dual: None,
                });
            }
        }
    }
    link_partners(&mut tests);
    TestSuite {
        ontology: ontology.to_string(),
        kind,
        raw_count,
        tests,
    }
}

fn id_prefix(kind: TestKind) -> &'static str {
    match kind {
        TestKind::Falsity => "F",
        TestKind::Truth => "T",
    }
}

fn link_partners(tests: &mut [TestCase]) {
    let mut owner: BTreeMap<(AxiomId, Vec<usize>, Polarity), TestId> = BTreeMap::new();
    for t in tests.iter() {
        for p in &t.provenance {
            owner
                .entry((p.axiom, p.path.clone(), p.polarity))
                .or_insert_with(|| t.id.clone());
        }
    }
    for t in tests.iter_mut() {
        let o = t.origin();
        t.partner = owner.get(&(o.axiom, o.path.clone(), o.polarity.flip())).cloned();
    }
}

/// One truth-test per falsity-test: the af-nnf negation of its conjecture.
/// Dual ids are linked both ways.
pub fn tt(falsity: &mut TestSuite) -> TestSuite {
    let mut tests: Vec<TestCase> = falsity
        .tests
        .iter()
        .enumerate()
        .map(|(i, f)| TestCase {
            id: TestId(format!("T{}", i + 1)),
            kind: TestKind::Truth,
            conjecture: negate_nnf(&f.conjecture).canonical_form(),
            provenance: f.provenance.clone(),
            partner: None,
            dual: Some(f.id.clone()),
        })
        .collect();
    let truth_of: BTreeMap<TestId, TestId> = falsity
        .tests
        .iter()
        .zip(&tests)
        .map(|(f, t)| (f.id.clone(), t.id.clone()))
        .collect();
    for (f, t) in falsity.tests.iter_mut().zip(tests.iter_mut()) {
        f.dual = Some(t.id.clone());
        t.partner = f.partner.as_ref().and_then(|p| truth_of.get(p).cloned());
    }
    TestSuite {
        ontology: falsity.ontology.clone(),
        kind: TestKind::Truth,
        raw_count: falsity.raw_count,
        tests,
    }
}

/// Does the af-nnf of this sentence contain a disjunction?
pub fn is_testable(formula: &Formula) -> bool {
    let nnf = normal::normalize(formula);
    let mut found = false;
    nnf.walk(&mut |g| found |= matches!(g, Formula::Or(_)));
    found
}

/// Both suites for an ontology plus bookkeeping.
#[derive(Debug, Clone)]
pub struct GeneratedSuites {
    pub falsity: TestSuite,
    pub truth: TestSuite,
    /// af-nnf form of every axiom, indexed by id. Provenance paths refer to these.
    pub normalized: BTreeMap<AxiomId, Formula>,
    pub tested_axioms: Vec<AxiomId>,
}

pub fn generate_suite(ontology: &Ontology) -> Result<GeneratedSuites, TestgenError> {
    let mut raw = Vec::new();
    let mut normalized = BTreeMap::new();
    let mut tested = Vec::new();
    for ax in &ontology.axioms {
        let nnf = normal::normalize(&ax.formula);
        let tests = ft(&nnf, ax.id)?;
        if !tests.is_empty() {
            tested.push(ax.id);
        }
        raw.extend(tests);
        normalized.insert(ax.id, nnf);
    }
    let mut falsity = dedup(&ontology.name, TestKind::Falsity, raw);
    let truth = tt(&mut falsity);
    Ok(GeneratedSuites {
        falsity,
        truth,
        normalized,
        tested_axioms: tested,
    })
}

/// One line of a suite file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteRecord {
    pub id: TestId,
    pub kind: TestKind,
    pub origins: Vec<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<TestId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<TestId>,
    pub conjecture: String,
}

impl From<&TestCase> for SuiteRecord {
    fn from(t: &TestCase) -> Self {
        SuiteRecord {
            id: t.id.clone(),
            kind: t.kind,
            origins: t.provenance.clone(),
            partner: t.partner.clone(),
            dual: t.dual.clone(),
            conjecture: t.conjecture.to_string(),
        }
    }
}

/// Writes one JSON record per unique test.
pub fn write_suite(suite: &TestSuite, mut out: impl Write) -> io::Result<()> {
    for t in &suite.tests {
        serde_json::to_writer(&mut out, &SuiteRecord::from(t))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum SuiteReadError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: bad conjecture: {source}")]
    Formula { line: usize, source: crate::tptp::TptpError },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Reads a suite file back into test cases.
pub fn read_suite(input: impl BufRead) -> Result<Vec<TestCase>, SuiteReadError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SuiteRecord =
            serde_json::from_str(&line).map_err(|source| SuiteReadError::Json { line: i + 1, source })?;
        let conjecture = parse_formula(&rec.conjecture)
            .map_err(|source| SuiteReadError::Formula { line: i + 1, source })?;
        out.push(TestCase {
            id: rec.id,
            kind: rec.kind,
            conjecture,
            provenance: rec.origins,
            partner: rec.partner,
            dual: rec.dual,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::normalize;
    use crate::tptp::{parse_formula, parse_ontology};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn canon(s: &str) -> Formula {
        p(s).canonical_form()
    }

    #[test]
    fn literal_has_no_tests() {
        assert!(ft(&p("p(a)"), AxiomId(1)).unwrap().is_empty());
        assert!(ft(&p("![X]: ~p(X)"), AxiomId(1)).unwrap().is_empty());
    }

    #[test]
    fn rejects_non_nnf_input() {
        assert_eq!(
            ft(&p("p => q"), AxiomId(3)),
            Err(TestgenError::NotAfNnf { axiom: AxiomId(3) })
        );
        assert_eq!(
            ft(&p("(![X]: p(X)) | (![X]: q(X))"), AxiomId(1)),
            Err(TestgenError::NotRectified { axiom: AxiomId(1) })
        );
    }

    #[test]
    fn binary_disjunction_yields_four_tests() {
        let raw = ft(&p("![X]: (p(X) | q(X))"), AxiomId(1)).unwrap();
        let got: Vec<_> = raw.iter().map(|r| r.conjecture.canonical_form()).collect();
        assert_eq!(
            got,
            vec![canon("![X]: p(X)"), canon("![X]: q(X)"), canon("![X]: ~p(X)"), canon("![X]: ~q(X)")]
        );
        assert_eq!(raw[0].provenance.path, vec![0, 0]);
        assert_eq!(raw[3].provenance.polarity, Polarity::Negative);
    }

    #[test]
    fn nary_conjunction_under_disjunction() {
        // FT0(a & b & c) contributes 6 tests, plus 4 from the enclosing disjunction.
        let raw = ft(&p("r | (a & b & c)"), AxiomId(1)).unwrap();
        assert_eq!(raw.len(), 4 + 6);
    }

    #[test]
    fn ft_distributes_over_top_conjunction() {
        let a = normalize(&p("![X]: (p(X) | q(X))"));
        let b = normalize(&p("![Y]: (r(Y) | ~s(Y))"));
        let both = Formula::and(vec![a.clone(), b.clone()]);
        let lhs: Vec<_> = ft(&both, AxiomId(1))
            .unwrap()
            .into_iter()
            .map(|r| r.conjecture)
            .collect();
        let mut rhs: Vec<_> = ft(&a, AxiomId(1)).unwrap().into_iter().map(|r| r.conjecture).collect();
        rhs.extend(ft(&b, AxiomId(1)).unwrap().into_iter().map(|r| r.conjecture));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dedup_merges_renamings_and_keeps_provenance() {
        let raw = vec![
            RawTest {
                conjecture: p("![P]: i(P, co)"),
                provenance: Provenance { axiom: AxiomId(1), path: vec![0], polarity: Polarity::Positive },
            },
            RawTest {
                conjecture: p("![E]: i(E, co)"),
                provenance: Provenance { axiom: AxiomId(2), path: vec![1], polarity: Polarity::Positive },
            },
            RawTest {
                conjecture: p("![E]: j(E, co)"),
                provenance: Provenance { axiom: AxiomId(2), path: vec![2], polarity: Polarity::Positive },
            },
        ];
        let suite = dedup("o", TestKind::Falsity, raw);
        assert_eq!(suite.raw_count, 3);
        assert_eq!(suite.len(), 2);
        assert_eq!(suite.tests[0].provenance.len(), 2);
        assert_eq!(suite.tests[0].origin_axioms(), vec![AxiomId(1), AxiomId(2)]);
    }

    #[test]
    fn truth_tests_negate_and_link() {
        let ont = parse_ontology("fof(a, axiom, ![X]: (p(X) => q(X))).", "o").unwrap();
        let s = generate_suite(&ont).unwrap();
        assert_eq!(s.falsity.len(), s.truth.len());
        for (f, t) in s.falsity.tests.iter().zip(&s.truth.tests) {
            assert_eq!(f.dual.as_ref(), Some(&t.id));
            assert_eq!(t.dual.as_ref(), Some(&f.id));
            assert_eq!(t.conjecture, negate_nnf(&f.conjecture).canonical_form());
        }
        let t1 = &s.truth.tests[0];
        assert_eq!(t1.conjecture, canon("?[X]: p(X)"));
    }

    #[test]
    fn empty_suite_yields_empty_truth_suite() {
        let mut f = dedup("o", TestKind::Falsity, Vec::new());
        assert!(tt(&mut f).is_empty());
    }

    #[test]
    fn testability() {
        assert!(!is_testable(&p("![X]: (p(X) & q(X))")));
        assert!(!is_testable(&p("instance(sibling, irreflexiveRelation)")));
        assert!(is_testable(&p("![X]: (p(X) => q(X))")));
    }

    #[test]
    fn partners_pair_up_within_an_axiom() {
        let ont = parse_ontology("fof(a, axiom, ![X]: ((p(X) & q(X)) => ?[Y]: r(X,Y))).", "o").unwrap();
        let s = generate_suite(&ont).unwrap();
        for t in &s.falsity.tests {
            let partner = s.falsity.get(t.partner.as_ref().expect("partner")).unwrap();
            let o = t.origin();
            assert!(partner
                .provenance
                .iter()
                .any(|q| q.axiom == o.axiom && q.path == o.path && q.polarity == o.polarity.flip()));
        }
    }

    #[test]
    fn suite_file_round_trip() {
        let ont = parse_ontology("fof(a, axiom, ![X]: (p(X) => q(X))).", "o").unwrap();
        let s = generate_suite(&ont).unwrap();
        let mut buf = Vec::new();
        write_suite(&s.falsity, &mut buf).unwrap();
        let back = read_suite(&buf[..]).unwrap();
        assert_eq!(back.len(), s.falsity.len());
        for (a, b) in back.iter().zip(&s.falsity.tests) {
            assert_eq!(a.conjecture.canonical_form(), b.conjecture);
            assert_eq!(a.provenance, b.provenance);
        }
    }
}
