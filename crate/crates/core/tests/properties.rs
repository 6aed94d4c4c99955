//! Invariants of the formula transformations, checked on generated formulas.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use ontotest::fol::{Formula, Term};
use ontotest::localize::localize;
use ontotest::normal::{arrow_free, is_af_nnf, is_rectified, negate_nnf, normalize, rectify, to_nnf};
use ontotest::oracle::equiv_on_models;
use ontotest::testgen::{dedup, ft, tt, TestKind};
use ontotest::tptp::{parse_formula, AxiomId};
use proptest::prelude::*;

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        3 => prop::sample::select(vec!["X", "Y", "Z", "W"]).prop_map(Term::var),
        1 => prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
    ];
    prop_oneof![3 => leaf.clone(), 1 => leaf.prop_map(|t| Term::app("f", vec![t]))]
}

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        4 => term().prop_map(|t| Formula::atom("p", vec![t])),
        4 => (term(), term()).prop_map(|(s, t)| Formula::atom("q", vec![s, t])),
        2 => (term(), term()).prop_map(|(s, t)| Formula::eq(s, t)),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ]
}

/// Formulas over p/1, q/2, f/1, a, b with every connective; free variables
/// are left open.
fn open_formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(4, 24, 3, |inner| {
        let var = prop::sample::select(vec!["X", "Y", "Z", "W"]);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
            (var, inner).prop_map(|(v, b)| Formula::exists(v, b)),
        ]
    })
}

fn sentence() -> impl Strategy<Value = Formula> {
    open_formula().prop_map(|f| f.universal_closure())
}

/// Sentences with at most `n` quantifiers.
fn small_sentence(n: usize) -> impl Strategy<Value = Formula> {
    sentence().prop_filter("too many quantifiers", move |f| f.quantifiers().len() <= n)
}

/// Renames the i-th binder (pre-order) to `names[i]`, following scopes.
fn rename_binders(f: &Formula, names: &[String]) -> Formula {
    fn go(f: &Formula, names: &[String], next: &mut usize, env: &BTreeMap<String, Term>) -> Formula {
        match f {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => {
                // Atoms contain no binders, so substituting the current scope is enough.
                f.substitute(env)
            }
            Formula::Not(g) => Formula::not(go(g, names, next, env)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| go(g, names, next, env)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| go(g, names, next, env)).collect()),
            Formula::Implies(a, b) => {
                let a = go(a, names, next, env);
                Formula::implies(a, go(b, names, next, env))
            }
            Formula::Iff(a, b) => {
                let a = go(a, names, next, env);
                Formula::iff(a, go(b, names, next, env))
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let name = names[*next].clone();
                *next += 1;
                let mut inner = env.clone();
                inner.insert(v.clone(), Term::var(name.clone()));
                let body = go(b, names, next, &inner);
                match f {
                    Formula::Forall(..) => Formula::forall(name, body),
                    _ => Formula::exists(name, body),
                }
            }
        }
    }
    go(f, names, &mut 0, &BTreeMap::new())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Alpha-equivalence by trying every bijection between the binders of `f`
/// and those of `g`.
fn alpha_equivalent(f: &Formula, g: &Formula) -> bool {
    let (nf, ng) = (f.quantifiers().len(), g.quantifiers().len());
    if nf != ng {
        return false;
    }
    let target: Vec<String> = (0..ng).map(|i| format!("B{i}")).collect();
    let g2 = rename_binders(g, &target);
    permutations(nf).into_iter().any(|perm| {
        let names: Vec<String> = perm.iter().map(|&i| format!("B{i}")).collect();
        rename_binders(f, &names) == g2
    })
}

/// Swaps the names of the first two adjacent binders of the same kind, if any.
fn swap_adjacent_binders(f: &Formula) -> Formula {
    match f {
        Formula::Forall(x, b) => match &**b {
            Formula::Forall(y, c) if x != y => Formula::forall(y.clone(), Formula::forall(x.clone(), (**c).clone())),
            _ => Formula::forall(x.clone(), swap_adjacent_binders(b)),
        },
        Formula::Exists(x, b) => match &**b {
            Formula::Exists(y, c) if x != y => Formula::exists(y.clone(), Formula::exists(x.clone(), (**c).clone())),
            _ => Formula::exists(x.clone(), swap_adjacent_binders(b)),
        },
        _ => f.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_matches_alpha_equivalence_on_independent_pairs(f in small_sentence(4), g in small_sentence(4)) {
        prop_assert_eq!(f.canonical_form() == g.canonical_form(), alpha_equivalent(&f, &g));
    }

    #[test]
    fn renamed_binders_are_alpha_equivalent(f in small_sentence(4), seed in 0usize..1000) {
        let n = f.quantifiers().len();
        let names: Vec<String> = (0..n).map(|i| format!("R{}", (seed + 7 * i) % 1000)).collect();
        let g = rename_binders(&f, &names);
        prop_assert!(alpha_equivalent(&f, &g));
        prop_assert_eq!(f.canonical_form(), g.canonical_form());
    }

    #[test]
    fn canonical_form_distinguishes_swapped_binders(f in small_sentence(4)) {
        let g = swap_adjacent_binders(&f);
        prop_assert_eq!(f.canonical_form() == g.canonical_form(), alpha_equivalent(&f, &g));
    }

    #[test]
    fn canonical_form_is_idempotent(f in sentence()) {
        let c = f.canonical_form();
        prop_assert_eq!(c.canonical_form(), c);
    }

    #[test]
    fn printed_sentences_parse_back(f in sentence()) {
        let text = f.to_string();
        let parsed = parse_formula(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(parsed, f);
    }

    #[test]
    fn normalize_yields_rectified_af_nnf(f in sentence()) {
        let n = normalize(&f);
        prop_assert!(is_af_nnf(&n), "{}", n);
        prop_assert!(is_rectified(&n), "{}", n);
        prop_assert!(n.is_sentence());
    }

    #[test]
    fn normalize_is_idempotent(f in sentence()) {
        let n = normalize(&f);
        prop_assert_eq!(normalize(&n), n);
    }

    #[test]
    fn rectify_keeps_free_variables(f in open_formula()) {
        let r = rectify(&f);
        prop_assert!(is_rectified(&r));
        prop_assert_eq!(r.free_vars(), f.free_vars());
    }

    #[test]
    fn negate_nnf_is_an_involution(f in sentence()) {
        let n = normalize(&f);
        let neg = negate_nnf(&n);
        prop_assert!(is_af_nnf(&neg));
        prop_assert_eq!(negate_nnf(&neg), n);
    }

    #[test]
    fn pipeline_steps_are_af_nnf(f in sentence()) {
        let nnf = to_nnf(&arrow_free(&rectify(&f)));
        prop_assert!(is_af_nnf(&nnf), "{}", nnf);
    }

    #[test]
    fn generated_tests_are_unique_af_nnf_sentences(f in sentence()) {
        let phi = normalize(&f);
        let raw = ft(&phi, AxiomId(1)).unwrap();
        let raw_forms: BTreeSet<Formula> = raw.iter().map(|t| t.conjecture.canonical_form()).collect();
        let mut falsity = dedup("prop", TestKind::Falsity, raw.clone());
        let truth = tt(&mut falsity);
        prop_assert_eq!(falsity.raw_count, raw.len());
        prop_assert_eq!(falsity.len(), raw_forms.len());
        prop_assert_eq!(truth.len(), falsity.len());
        for t in falsity.tests.iter().chain(&truth.tests) {
            prop_assert!(t.conjecture.is_sentence(), "{}", t.conjecture);
            prop_assert!(is_af_nnf(&t.conjecture), "{}", t.conjecture);
            prop_assert_eq!(t.conjecture.canonical_form(), t.conjecture.clone());
        }
        let total: usize = falsity.tests.iter().map(|t| t.provenance.len()).sum();
        prop_assert_eq!(total, raw.len());
        for (t, u) in falsity.tests.iter().zip(&truth.tests) {
            prop_assert_eq!(&u.conjecture, &negate_nnf(&t.conjecture).canonical_form());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn normalize_preserves_meaning(f in sentence()) {
        prop_assert!(equiv_on_models(&f, &normalize(&f), None, 2).unwrap());
    }

    #[test]
    fn negate_nnf_negates(f in sentence()) {
        let n = normalize(&f);
        prop_assert!(equiv_on_models(&negate_nnf(&n), &Formula::not(n.clone()), None, 2).unwrap());
    }

    #[test]
    fn every_test_localizes_to_an_equivalent_decomposition(f in sentence()) {
        let phi = normalize(&f);
        let mut seen = BTreeSet::new();
        for t in ft(&phi, AxiomId(1)).unwrap() {
            if !seen.insert(t.provenance.path.clone()) {
                continue;
            }
            let loc = localize(&phi, &t.provenance.path).unwrap();
            prop_assert!(equiv_on_models(&loc.reassembled(), &phi, None, 2).unwrap(), "{} at {:?}", phi, t.provenance.path);
        }
    }
}

#[test]
fn brute_force_alpha_check_sanity() {
    let f = parse_formula("![X]: ?[Y]: q(X,Y)").unwrap();
    let g = parse_formula("![A]: ?[B]: q(A,B)").unwrap();
    let h = parse_formula("![A]: ?[B]: q(B,A)").unwrap();
    assert!(alpha_equivalent(&f, &g));
    assert!(!alpha_equivalent(&f, &h));
    assert_eq!(permutations(3).len(), 6);
}

#[test]
fn seeded_generator_produces_sentences() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let s = common::gen::sentence(&mut rng, 3, 8);
        assert!(s.is_sentence(), "{s}");
        assert!(s.quantifiers().len() <= 8);
    }
}
