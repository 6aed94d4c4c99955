//! Campaign summaries: per-suite counts, grades, coverage and timing.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{AxiomVerdict, CampaignConfig, Grade, LocalizationEntry, TestOutcome, TestStatus};
use crate::testgen::{GeneratedSuites, TestKind};
use crate::tptp::{AxiomId, Ontology};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    /// Axioms occurring in at least one proof.
    pub count: usize,
    pub total: usize,
    pub percentage: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeBuckets {
    pub le_1s: usize,
    pub le_10s: usize,
    pub gt_120s: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeCounts {
    pub defective: usize,
    pub completely_suitable: usize,
    pub partially_suitable: usize,
    pub unsuitable: usize,
    pub untested: usize,
    pub not_defective: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub tests: usize,
    pub proved: usize,
    pub harness_errors: usize,
    pub coverage: Coverage,
    pub buckets: TimeBuckets,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub ontology: String,
    pub total_axioms: usize,
    pub tested_axioms: usize,
    pub provers: Vec<String>,
    pub seconds_limit: f64,
    pub kinds: Vec<TestKind>,
    pub falsity: Option<SuiteSummary>,
    pub truth: Option<SuiteSummary>,
    pub total: SuiteSummary,
    pub grades: GradeCounts,
    pub axioms: Vec<AxiomVerdict>,
    pub tests: Vec<TestOutcome>,
    pub localizations: Vec<LocalizationEntry>,
    /// A falsity-test and its dual truth-test were both proved.
    pub inconsistent_suspect: bool,
}

/// Union of used-axiom sets over proved tests, against `total_axioms`.
pub fn coverage<'a>(tests: impl IntoIterator<Item = &'a TestOutcome>, total_axioms: usize) -> Coverage {
    let used: BTreeSet<AxiomId> = tests
        .into_iter()
        .filter(|t| t.status.is_proved())
        .flat_map(|t| t.used_axioms.iter().copied())
        .collect();
    let percentage = if total_axioms == 0 {
        0.0
    } else {
        100.0 * used.len() as f64 / total_axioms as f64
    };
    Coverage { count: used.len(), total: total_axioms, percentage }
}

/// Proof-time histogram over proved tests.
pub fn time_buckets<'a>(tests: impl IntoIterator<Item = &'a TestOutcome>) -> TimeBuckets {
    let mut b = TimeBuckets::default();
    for t in tests.into_iter().filter(|t| t.status.is_proved()) {
        if t.seconds <= 1.0 {
            b.le_1s += 1;
        }
        if t.seconds <= 10.0 {
            b.le_10s += 1;
        }
        if t.seconds > 120.0 {
            b.gt_120s += 1;
        }
    }
    b
}

fn summarize<'a>(tests: impl IntoIterator<Item = &'a TestOutcome> + Clone, total_axioms: usize) -> SuiteSummary {
    let all: Vec<&TestOutcome> = tests.clone().into_iter().collect();
    SuiteSummary {
        tests: all.len(),
        proved: all.iter().filter(|t| t.status.is_proved()).count(),
        harness_errors: all.iter().filter(|t| matches!(t.status, TestStatus::HarnessError(_))).count(),
        coverage: coverage(all.iter().copied(), total_axioms),
        buckets: time_buckets(all.iter().copied()),
    }
}

#[allow(clippy::too_many_arguments)]
pub(super) fn build(
    ontology: &Ontology,
    suites: &GeneratedSuites,
    config: &CampaignConfig,
    provers: Vec<String>,
    axioms: Vec<AxiomVerdict>,
    tests: Vec<TestOutcome>,
    localizations: Vec<LocalizationEntry>,
    inconsistent_suspect: bool,
) -> CampaignReport {
    let n = ontology.len();
    let of_kind = |k: TestKind| {
        config
            .kinds
            .contains(&k)
            .then(|| summarize(tests.iter().filter(|t| t.kind == k), n))
    };
    let mut grades = GradeCounts::default();
    for a in &axioms {
        *match a.grade {
            Grade::Defective => &mut grades.defective,
            Grade::CompletelySuitable => &mut grades.completely_suitable,
            Grade::PartiallySuitable => &mut grades.partially_suitable,
            Grade::Unsuitable => &mut grades.unsuitable,
            Grade::Untested => &mut grades.untested,
            Grade::NotDefective => &mut grades.not_defective,
        } += 1;
    }
    CampaignReport {
        ontology: ontology.name.clone(),
        total_axioms: n,
        tested_axioms: suites.tested_axioms.len(),
        provers,
        seconds_limit: config.seconds,
        kinds: config.kinds.iter().copied().collect(),
        falsity: of_kind(TestKind::Falsity),
        truth: of_kind(TestKind::Truth),
        total: summarize(tests.iter(), n),
        grades,
        axioms,
        tests,
        localizations,
        inconsistent_suspect,
    }
}

impl CampaignReport {
    /// Some falsity-test was proved.
    pub fn defects_found(&self) -> bool {
        self.falsity.as_ref().is_some_and(|s| s.proved > 0)
    }

    pub fn coverage(&self) -> Coverage {
        self.total.coverage
    }

    pub fn time_buckets(&self) -> TimeBuckets {
        self.total.buckets
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text summary table followed by the axiom grades and proved
    /// falsity-tests.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "ontology {}: {} axioms, {} tested; prover {}; limit {}s",
            self.ontology,
            self.total_axioms,
            self.tested_axioms,
            self.provers.join(", "),
            self.seconds_limit
        );
        let _ = writeln!(
            out,
            "{:<6}{:>7}{:>7}{:>5}{:>6}{:>6}{:>5}{:>6}{:>9}{:>6}{:>6}{:>6}",
            "", "#Ts", "Pr", "D", "C.S.", "P.S.", "U.", "#Ax", "Perc", "≤1", "≤10", ">120"
        );
        let g = &self.grades;
        let dash = || "-".to_string();
        let row = |out: &mut String, label: &str, s: &SuiteSummary, d: String, cs: String, ps: String, u: String| {
            let _ = writeln!(
                out,
                "{:<6}{:>7}{:>7}{:>5}{:>6}{:>6}{:>5}{:>6}{:>8.2}%{:>6}{:>6}{:>6}",
                label,
                s.tests,
                s.proved,
                d,
                cs,
                ps,
                u,
                s.coverage.count,
                s.coverage.percentage,
                s.buckets.le_1s,
                s.buckets.le_10s,
                s.buckets.gt_120s
            );
        };
        if let Some(f) = &self.falsity {
            row(&mut out, "FT", f, g.defective.to_string(), dash(), dash(), dash());
        }
        if let Some(t) = &self.truth {
            row(
                &mut out,
                "TT",
                t,
                dash(),
                g.completely_suitable.to_string(),
                g.partially_suitable.to_string(),
                g.unsuitable.to_string(),
            );
        }
        let or_dash = |present: bool, v: usize| if present { v.to_string() } else { dash() };
        row(
            &mut out,
            "Total",
            &self.total,
            or_dash(self.falsity.is_some(), g.defective),
            or_dash(self.truth.is_some(), g.completely_suitable),
            or_dash(self.truth.is_some(), g.partially_suitable),
            or_dash(self.truth.is_some(), g.unsuitable),
        );
        if self.total.harness_errors > 0 {
            let _ = writeln!(out, "harness errors: {}", self.total.harness_errors);
        }
        if self.inconsistent_suspect {
            let _ = writeln!(out, "WARNING: a falsity-test and its dual truth-test are both proved; the ontology may be inconsistent");
        }
        let _ = writeln!(out, "\naxioms:");
        for a in &self.axioms {
            let grade = serde_json::to_value(a.grade).expect("grade serializes");
            let _ = write!(out, "  {} {}: {}", a.axiom, a.name, grade.as_str().unwrap_or_default());
            if !a.supporting.is_empty() {
                let ids: Vec<String> = a.supporting.iter().map(|t| t.to_string()).collect();
                let _ = write!(out, " [{}]", ids.join(", "));
            }
            out.push('\n');
        }
        let proved: Vec<&TestOutcome> = self
            .tests
            .iter()
            .filter(|t| t.kind == TestKind::Falsity && t.status.is_proved())
            .collect();
        if !proved.is_empty() {
            let _ = writeln!(out, "\nproved falsity-tests:");
            for t in proved {
                let used: Vec<String> = t.used_axioms.iter().map(|a| a.to_string()).collect();
                let _ = writeln!(out, "  {} {} ({:.3}s; uses {{{}}})", t.id, t.conjecture, t.seconds, used.join(", "));
                for l in self.localizations.iter().filter(|l| l.test == t.id) {
                    let _ = writeln!(out, "    axiom {} at {:?}: delta {} ; simplified {}", l.axiom, l.path, l.delta, l.simplified);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::UnknownReason;
    use crate::testgen::TestId;

    fn t(status: TestStatus, secs: f64, used: &[usize]) -> TestOutcome {
        TestOutcome {
            id: TestId("F1".into()),
            kind: TestKind::Falsity,
            conjecture: "p".into(),
            origins: vec![],
            status,
            seconds: secs,
            used_axioms: used.iter().copied().map(AxiomId).collect(),
            runs: vec![],
        }
    }

    #[test]
    fn coverage_is_a_set_union() {
        let tests = [
            t(TestStatus::Proved, 0.1, &[1, 2]),
            t(TestStatus::Proved, 0.1, &[2, 3]),
            t(TestStatus::Unknown(UnknownReason::Timeout), 5.0, &[4]),
        ];
        let c = coverage(&tests, 4);
        assert_eq!(c.count, 3);
        assert_eq!(c.percentage, 75.0);
        assert_eq!(coverage(&tests[2..], 4).percentage, 0.0);
        assert_eq!(coverage(&[], 0).percentage, 0.0);
    }

    #[test]
    fn buckets() {
        let tests = [
            t(TestStatus::Proved, 0.5, &[]),
            t(TestStatus::Proved, 5.0, &[]),
            t(TestStatus::Proved, 200.0, &[]),
            t(TestStatus::Unknown(UnknownReason::Timeout), 0.2, &[]),
        ];
        assert_eq!(time_buckets(&tests), TimeBuckets { le_1s: 1, le_10s: 2, gt_120s: 1 });
        assert_eq!(time_buckets(&[]), TimeBuckets::default());
    }
}
