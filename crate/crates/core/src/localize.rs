//! Locating the redundant subformula behind a falsity-test.
//!
//! For a pair `(δ)^∀`, `(¬δ)^∀` generated from an af-nnf axiom `φ`, the axiom
//! is equivalent to `Q̄x(((Q̄y δ) ∨ γ) ∧ ψ)`. [`localize`] rebuilds that shape
//! from the test's subformula path by walking from `δ` back to the root, and
//! [`simplify`] produces the candidate axiom obtained by replacing the
//! disjunction with `Q̄y δ` or with `γ`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::{Formula, Quantifier};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationResult {
    pub outer: Vec<(Quantifier, String)>,
    pub inner: Vec<(Quantifier, String)>,
    pub delta: Formula,
    pub gamma: Formula,
    /// `Formula::True` when there is no side condition.
    pub psi: Formula,
}

impl LocalizationResult {
    /// The disjunction `(Q̄y δ) ∨ γ` associated to the axiom by the pair.
    pub fn associated(&self) -> Formula {
        Formula::or(vec![Formula::quantified(&self.inner, self.delta.clone()), self.gamma.clone()])
    }

    /// `Q̄x(((Q̄y δ) ∨ γ) ∧ ψ)`.
    pub fn reassembled(&self) -> Formula {
        self.with_disjunction(self.associated())
    }

    fn with_disjunction(&self, d: Formula) -> Formula {
        let body = if self.psi == Formula::True {
            d
        } else {
            Formula::and(vec![d, self.psi.clone()])
        };
        Formula::quantified(&self.outer, body)
    }
}

/// Which disjunct survives the simplification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Simplification {
    /// `(δ)^∀` was proved: `γ` is redundant.
    KeepDelta,
    /// `(¬δ)^∀` was proved: `Q̄y δ` is redundant.
    DropDelta,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizeError {
    #[error("path {0:?} does not address a subformula")]
    NoSuchSubformula(Vec<usize>),
    #[error("path {0:?} is not below a disjunction, so no tests exist there")]
    NotUnderDisjunction(Vec<usize>),
}

/// Partial decomposition of a subformula `χ` containing `δ`:
/// `χ ≡ outer(((inner δ) ∨ gamma) ∧ psi)`, where `None` stands for `false`
/// (gamma) and `true` (psi).
struct Parts {
    outer: Vec<(Quantifier, String)>,
    inner: Vec<(Quantifier, String)>,
    gamma: Option<Formula>,
    psi: Option<Formula>,
}

/// Decomposes `phi` (a rectified af-nnf sentence) around the subformula at `path`.
pub fn localize(phi: &Formula, path: &[usize]) -> Result<LocalizationResult, LocalizeError> {
    let delta = phi
        .at_path(path)
        .ok_or_else(|| LocalizeError::NoSuchSubformula(path.to_vec()))?
        .clone();
    if path.is_empty() || !under_disjunction(phi, path) {
        return Err(LocalizeError::NotUnderDisjunction(path.to_vec()));
    }
    let parts = decompose(phi, path);
    Ok(LocalizationResult {
        outer: parts.outer,
        inner: parts.inner,
        delta,
        gamma: parts.gamma.expect("a disjunction lies above delta"),
        psi: parts.psi.unwrap_or(Formula::True),
    })
}

/// Tests exist for `δ` only when the walk from the root through conjunctions
/// and quantifiers reaches a disjunction strictly above `δ`.
fn under_disjunction(phi: &Formula, path: &[usize]) -> bool {
    let mut cur = phi;
    for &i in path {
        match cur {
            Formula::Or(_) => return true,
            Formula::And(cs) => cur = &cs[i],
            Formula::Forall(_, b) | Formula::Exists(_, b) => cur = b,
            _ => return false,
        }
    }
    false
}

fn decompose(chi: &Formula, path: &[usize]) -> Parts {
    let Some((&i, rest)) = path.split_first() else {
        return Parts {
            outer: Vec::new(),
            inner: Vec::new(),
            gamma: None,
            psi: None,
        };
    };
    match chi {
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let q = if matches!(chi, Formula::Forall(..)) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            let mut parts = decompose(body, rest);
            if parts.gamma.is_none() && parts.psi.is_none() {
                // Still directly above δ: the binder belongs to Q̄y.
                parts.inner.insert(0, (q, v.clone()));
            } else {
                parts.outer.insert(0, (q, v.clone()));
            }
            parts
        }
        Formula::Or(children) => {
            let mut parts = decompose(&children[i], rest);
            let others = Formula::or(without(children, i));
            parts.gamma = Some(match parts.gamma {
                Some(g) => Formula::or(vec![g, others.clone()]),
                None => others.clone(),
            });
            parts.psi = parts.psi.map(|p| Formula::or(vec![p, others]));
            parts
        }
        Formula::And(children) => {
            let mut parts = decompose(&children[i], rest);
            let others = Formula::and(without(children, i));
            parts.psi = Some(match parts.psi {
                Some(p) => Formula::and(vec![p, others]),
                None => others,
            });
            parts
        }
        _ => unreachable!("path descends through a literal"),
    }
}

fn without(children: &[Formula], skip: usize) -> Vec<Formula> {
    children
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != skip)
        .map(|(_, c)| c.clone())
        .collect()
}

/// The candidate axiom with the associated disjunction replaced by `Q̄y δ`
/// (keep-delta) or by `γ` (drop-delta).
pub fn simplify(loc: &LocalizationResult, which: Simplification) -> Formula {
    let replacement = match which {
        Simplification::KeepDelta => Formula::quantified(&loc.inner, loc.delta.clone()),
        Simplification::DropDelta => loc.gamma.clone(),
    };
    loc.with_disjunction(replacement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::normalize;
    use crate::tptp::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn base_case_has_empty_prefixes() {
        let phi = p("d | g");
        let loc = localize(&phi, &[0]).unwrap();
        assert!(loc.outer.is_empty() && loc.inner.is_empty());
        assert_eq!(loc.delta, p("d"));
        assert_eq!(loc.gamma, p("g"));
        assert_eq!(loc.psi, Formula::True);
        assert_eq!(loc.reassembled(), phi);
        assert_eq!(simplify(&loc, Simplification::KeepDelta), p("d"));
        assert_eq!(simplify(&loc, Simplification::DropDelta), p("g"));
    }

    #[test]
    fn quantified_case_with_top_conjunction() {
        // ∀z(δ ∨ γ') ∧ β
        let phi = p("(![Z]: (d(Z) | g(Z))) & b");
        let loc = localize(&phi, &[0, 0, 0]).unwrap();
        assert_eq!(loc.outer, vec![(Quantifier::Forall, "Z".to_string())]);
        assert!(loc.inner.is_empty());
        assert_eq!(loc.gamma, Formula::Atom("g".into(), vec![crate::fol::Term::var("Z")]));
        assert_eq!(loc.psi, p("b"));
    }

    #[test]
    fn quantifiers_directly_above_delta_form_inner_prefix() {
        let phi = normalize(&p("![C]: (instance(C, circle) => ?[P]: f(C) = P)"));
        // ∀c(¬instance(c,circle) ∨ ∃p f(c)=p); δ = f(c)=p under ∃p.
        let loc = localize(&phi, &[0, 1, 0]).unwrap();
        assert_eq!(loc.outer, vec![(Quantifier::Forall, "C".to_string())]);
        assert_eq!(loc.inner, vec![(Quantifier::Exists, "P".to_string())]);
        assert_eq!(
            simplify(&loc, Simplification::KeepDelta),
            p("![C]: ?[P]: f(C) = P")
        );
        let loc = localize(&phi, &[0, 1]).unwrap();
        assert_eq!(simplify(&loc, Simplification::KeepDelta), p("![C]: ?[P]: f(C) = P"));
        assert_eq!(simplify(&loc, Simplification::DropDelta), p("![C]: ~instance(C, circle)"));
    }

    #[test]
    fn conjunction_inside_disjunction() {
        // (δ ∧ β1) ∨ β  ≡  (δ ∨ β) ∧ (β1 ∨ β)
        let phi = p("(d & b1) | b");
        let loc = localize(&phi, &[0, 0]).unwrap();
        assert_eq!(loc.gamma, p("b"));
        assert_eq!(loc.psi, p("b1 | b"));
    }

    #[test]
    fn nary_disjunction_folds_rest_into_gamma() {
        let phi = p("a | d | c");
        let loc = localize(&phi, &[1]).unwrap();
        assert_eq!(loc.gamma, p("a | c"));
    }

    #[test]
    fn gamma_is_never_false() {
        let phi = p("![X]: ((p(X) & ?[Y]: (q(X,Y) | r(Y))) | s(X))");
        for path in [vec![0, 0], vec![0, 1], vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 1, 0], vec![0, 0, 1, 0, 1]] {
            let loc = localize(&phi, &path).unwrap();
            assert_ne!(loc.gamma, Formula::False, "{path:?}");
        }
    }

    #[test]
    fn rejects_positions_without_tests() {
        let phi = p("(![X]: p(X)) & (q | r)");
        assert!(matches!(localize(&phi, &[0, 0]), Err(LocalizeError::NotUnderDisjunction(_))));
        assert!(matches!(localize(&phi, &[]), Err(LocalizeError::NotUnderDisjunction(_))));
        assert!(matches!(localize(&phi, &[5]), Err(LocalizeError::NoSuchSubformula(_))));
        assert!(localize(&phi, &[1, 0]).is_ok());
    }
}
