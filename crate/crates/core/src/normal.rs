//! Rectified arrow-free negation normal form (af-nnf) and axiom role
//! classification.
//!
//! The pipeline is rectify → remove arrows → push negations. Grouping of
//! n-ary connectives is preserved: the negation of a conjunction becomes one
//! disjunction child of its parent, never spliced into it.

use std::collections::BTreeSet;

use crate::fol::{fresh_name, Formula, Term};
use crate::tptp::AxiomRole;

/// Renames clashing binders so each quantifier binds a distinct symbol that
/// also differs from every free variable. The first binder of a name keeps
/// it; later ones get the smallest unused numeric suffix, in pre-order.
pub fn rectify(f: &Formula) -> Formula {
    let mut taken: BTreeSet<String> = f.free_vars().into_iter().collect();
    let all = f.all_var_names();
    rectify_in(f, &mut taken, &all, &std::collections::BTreeMap::new())
}

fn rectify_in(
    f: &Formula,
    taken: &mut BTreeSet<String>,
    all: &BTreeSet<String>,
    env: &std::collections::BTreeMap<String, Term>,
) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => f.substitute(env),
        Formula::Not(g) => Formula::not(rectify_in(g, taken, all, env)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rectify_in(g, taken, all, env)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rectify_in(g, taken, all, env)).collect()),
        Formula::Implies(a, b) => {
            let a = rectify_in(a, taken, all, env);
            Formula::implies(a, rectify_in(b, taken, all, env))
        }
        Formula::Iff(a, b) => {
            let a = rectify_in(a, taken, all, env);
            Formula::iff(a, rectify_in(b, taken, all, env))
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let name = if taken.contains(v) {
                // Avoid every name in the input as well, so a renamed binder
                // never collides with one met later in the walk.
                let mut avoid = taken.clone();
                avoid.extend(all.iter().cloned());
                fresh_name(v, &avoid)
            } else {
                v.clone()
            };
            taken.insert(name.clone());
            let mut inner = env.clone();
            if name == *v {
                inner.remove(v);
            } else {
                inner.insert(v.clone(), Term::Var(name.clone()));
            }
            let body = rectify_in(body, taken, all, &inner);
            match f {
                Formula::Forall(..) => Formula::forall(name, body),
                _ => Formula::exists(name, body),
            }
        }
    }
}

/// Replaces `a <=> b` by `(a => b) & (b => a)` and then `a => b` by `~a | b`,
/// outside-in, until no arrow is left.
pub fn arrow_free(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(arrow_free(g)),
        Formula::And(gs) => Formula::And(gs.iter().map(arrow_free).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(arrow_free).collect()),
        Formula::Implies(a, b) => Formula::or(vec![Formula::not(arrow_free(a)), arrow_free(b)]),
        Formula::Iff(a, b) => {
            let expanded = Formula::and(vec![
                Formula::implies((**a).clone(), (**b).clone()),
                Formula::implies((**b).clone(), (**a).clone()),
            ]);
            arrow_free(&expanded)
        }
        Formula::Forall(v, g) => Formula::forall(v.clone(), arrow_free(g)),
        Formula::Exists(v, g) => Formula::exists(v.clone(), arrow_free(g)),
    }
}

/// Pushes negations down to atoms of an arrow-free formula, folding
/// `$true`/`$false` on the way.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::True => constant(positive),
        Formula::False => constant(!positive),
        Formula::Atom(..) | Formula::Eq(..) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(gs) | Formula::Or(gs) => {
            let conj = matches!(f, Formula::And(_)) == positive;
            let items: Vec<Formula> = gs.iter().map(|g| nnf(g, positive)).collect();
            if conj {
                fold_and(items)
            } else {
                fold_or(items)
            }
        }
        Formula::Implies(a, b) => nnf(&Formula::or(vec![Formula::not((**a).clone()), (**b).clone()]), positive),
        Formula::Iff(..) => nnf(&arrow_free(f), positive),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let body = nnf(g, positive);
            if matches!(body, Formula::True | Formula::False) {
                return body;
            }
            let universal = matches!(f, Formula::Forall(..)) == positive;
            if universal {
                Formula::forall(v.clone(), body)
            } else {
                Formula::exists(v.clone(), body)
            }
        }
    }
}

fn constant(value: bool) -> Formula {
    if value {
        Formula::True
    } else {
        Formula::False
    }
}

fn fold_and(items: Vec<Formula>) -> Formula {
    if items.contains(&Formula::False) {
        return Formula::False;
    }
    Formula::and(items.into_iter().filter(|g| *g != Formula::True).collect())
}

fn fold_or(items: Vec<Formula>) -> Formula {
    if items.contains(&Formula::True) {
        return Formula::True;
    }
    Formula::or(items.into_iter().filter(|g| *g != Formula::False).collect())
}

/// Full pipeline: rectify, remove arrows, push negations.
///
/// Biconditionals duplicate their operands, so the result is rectified once
/// more to keep binders distinct.
pub fn normalize(f: &Formula) -> Formula {
    let out = to_nnf(&arrow_free(&rectify(f)));
    if is_rectified(&out) {
        out
    } else {
        rectify(&out)
    }
}

/// Negation of an af-nnf formula, returned in af-nnf.
pub fn negate_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

/// Rule iff the sentence is a (possibly empty) chain of universal
/// quantifiers over an implication.
pub fn classify_role(f: &Formula) -> AxiomRole {
    let mut cur = f;
    while let Formula::Forall(_, body) = cur {
        cur = body;
    }
    if matches!(cur, Formula::Implies(..)) {
        AxiomRole::Rule
    } else {
        AxiomRole::NonRule
    }
}

/// No arrows, and negation only directly above atoms.
pub fn is_af_nnf(f: &Formula) -> bool {
    let mut ok = true;
    f.walk(&mut |g| match g {
        Formula::Implies(..) | Formula::Iff(..) => ok = false,
        Formula::Not(inner) if !matches!(**inner, Formula::Atom(..) | Formula::Eq(..)) => ok = false,
        _ => {}
    });
    ok
}

/// Binders are pairwise distinct and no bound name also occurs free.
pub fn is_rectified(f: &Formula) -> bool {
    let free: BTreeSet<String> = f.free_vars().into_iter().collect();
    let mut seen = BTreeSet::new();
    f.quantifiers()
        .into_iter()
        .all(|(_, v)| !free.contains(&v) && seen.insert(v))
}
