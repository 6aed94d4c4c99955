//! Conversion of sentences to clause sets: normalize, Skolemize, distribute.

use std::collections::HashMap;

use thiserror::Error;

use super::clause::{CTerm, Clause, Literal, Origin, Symbols, EQ};
use crate::fol::{Formula, Term};
use crate::normal::normalize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClausifyError {
    #[error("clause count exceeds the cap of {0}")]
    TooManyClauses(usize),
}

/// Clauses over a shared symbol table.
#[derive(Debug, Clone, Default)]
pub struct ClauseSet {
    pub symbols: Symbols,
    pub clauses: Vec<Clause>,
}

/// Stateful clausifier: owns the symbol table and the Skolem counter so
/// Skolem symbols stay fresh across all sentences of one problem.
#[derive(Debug)]
pub struct Clausifier {
    pub symbols: Symbols,
    next_skolem: usize,
    max_clauses: usize,
}

impl Clausifier {
    /// `reserve` lists every sentence of the problem so that no Skolem symbol
    /// collides with an existing name.
    pub fn new<'a>(reserve: impl IntoIterator<Item = &'a Formula>, max_clauses: usize) -> Self {
        let mut symbols = Symbols::default();
        for f in reserve {
            let sig = crate::tptp::Signature::of_formula(f);
            for name in sig.predicates.keys().chain(sig.functions.keys()) {
                symbols.intern(name);
            }
        }
        Clausifier { symbols, next_skolem: 1, max_clauses }
    }

    fn fresh_skolem(&mut self) -> String {
        loop {
            let name = format!("sk{}", self.next_skolem);
            self.next_skolem += 1;
            if !self.symbols.contains(&name) {
                self.symbols.intern(&name);
                return name;
            }
        }
    }

    /// Clauses of the universal closure of `f`, tagged with `origin`.
    pub fn clausify(&mut self, f: &Formula, origin: Origin) -> Result<Vec<Clause>, ClausifyError> {
        let nnf = normalize(&f.universal_closure());
        let skolemized = self.skolemize(&nnf, &mut Vec::new());
        let mut vars = HashMap::new();
        let raw = cnf(&skolemized, self.max_clauses)?;
        Ok(raw
            .into_iter()
            .map(|lits| {
                let lits = lits.into_iter().map(|l| self.literal(l, &mut vars)).collect();
                Clause::new(lits, origin.clone())
            })
            .collect())
    }

    fn skolemize(&mut self, f: &Formula, universals: &mut Vec<String>) -> Formula {
        match f {
            Formula::Forall(v, body) => {
                universals.push(v.clone());
                let body = self.skolemize(body, universals);
                universals.pop();
                Formula::forall(v.clone(), body)
            }
            Formula::Exists(v, body) => {
                let free = f.free_vars();
                let args: Vec<Term> = universals
                    .iter()
                    .filter(|u| free.contains(u))
                    .map(|u| Term::var(u.clone()))
                    .collect();
                let sk = Term::app(self.fresh_skolem(), args);
                let body = body.substitute(&[(v.clone(), sk)].into_iter().collect());
                self.skolemize(&body, universals)
            }
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.skolemize(g, universals)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.skolemize(g, universals)).collect()),
            _ => f.clone(),
        }
    }

    fn literal(&mut self, (positive, atom): (bool, &Formula), vars: &mut HashMap<String, u32>) -> Literal {
        let (pred, args) = match atom {
            Formula::Atom(p, args) => (self.symbols.intern(p), args.iter().collect::<Vec<_>>()),
            Formula::Eq(l, r) => (self.symbols.intern(EQ), vec![l, r]),
            _ => unreachable!("literal expected"),
        };
        Literal {
            positive,
            pred,
            args: args.into_iter().map(|t| self.term(t, vars)).collect(),
        }
    }

    fn term(&mut self, t: &Term, vars: &mut HashMap<String, u32>) -> CTerm {
        match t {
            Term::Var(v) => {
                let next = vars.len() as u32;
                CTerm::Var(*vars.entry(v.clone()).or_insert(next))
            }
            Term::App(f, args) => {
                let s = self.symbols.intern(f);
                CTerm::App(s, args.iter().map(|a| self.term(a, vars)).collect())
            }
        }
    }
}

type RawClause<'a> = Vec<(bool, &'a Formula)>;

fn cnf(f: &Formula, cap: usize) -> Result<Vec<RawClause<'_>>, ClausifyError> {
    match f {
        Formula::True => Ok(Vec::new()),
        Formula::False => Ok(vec![Vec::new()]),
        Formula::Atom(..) | Formula::Eq(..) => Ok(vec![vec![(true, f)]]),
        Formula::Not(g) => Ok(vec![vec![(false, &**g)]]),
        Formula::Forall(_, body) => cnf(body, cap),
        Formula::And(gs) => {
            let mut out = Vec::new();
            for g in gs {
                out.extend(cnf(g, cap)?);
                if out.len() > cap {
                    return Err(ClausifyError::TooManyClauses(cap));
                }
            }
            Ok(out)
        }
        Formula::Or(gs) => {
            let mut acc: Vec<RawClause> = vec![Vec::new()];
            for g in gs {
                let part = cnf(g, cap)?;
                if acc.len().saturating_mul(part.len()) > cap {
                    return Err(ClausifyError::TooManyClauses(cap));
                }
                acc = acc
                    .iter()
                    .flat_map(|a| part.iter().map(move |p| a.iter().chain(p).cloned().collect()))
                    .collect();
            }
            Ok(acc)
        }
        Formula::Exists(..) | Formula::Implies(..) | Formula::Iff(..) => {
            unreachable!("input is skolemized af-nnf")
        }
    }
}

/// Clausifies a single sentence with its own symbol table.
pub fn clausify(s: &Formula) -> Result<ClauseSet, ClausifyError> {
    let mut c = Clausifier::new([s], super::DEFAULT_MAX_CLAUSES);
    let clauses = c.clausify(s, Origin::NegatedConjecture)?;
    Ok(ClauseSet { symbols: c.symbols, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tptp::parse_formula;

    fn show(set: &ClauseSet) -> Vec<String> {
        set.clauses.iter().map(|c| c.display(&set.symbols).to_string()).collect()
    }

    #[test]
    fn skolem_function_depends_on_outer_universal() {
        let set = clausify(&parse_formula("![X]: ?[Y]: p(X,Y)").unwrap()).unwrap();
        assert_eq!(show(&set), vec!["p(X0,sk1(X0))"]);
    }

    #[test]
    fn distribution() {
        let set = clausify(&parse_formula("p(a) | (q(a) & r(a))").unwrap()).unwrap();
        assert_eq!(show(&set), vec!["p(a) | q(a)", "p(a) | r(a)"]);
    }

    #[test]
    fn negated_reflexivity_conjecture_gets_skolem_constant() {
        let conj = parse_formula("![C]: ?[P]: 'CenterOfCircleFn'(C) = P").unwrap();
        let set = clausify(&Formula::not(conj)).unwrap();
        assert_eq!(show(&set), vec!["'CenterOfCircleFn'(sk1) != X0"]);
    }

    #[test]
    fn skolem_arity_is_minimal() {
        let set = clausify(&parse_formula("![X]: (p(X) | ?[Y]: q(Y))").unwrap()).unwrap();
        assert_eq!(show(&set), vec!["p(X0) | q(sk1)"]);
    }

    #[test]
    fn skolem_names_avoid_existing_symbols() {
        let set = clausify(&parse_formula("?[Y]: sk1(Y)").unwrap()).unwrap();
        assert_eq!(show(&set), vec!["sk1(sk2)"]);
    }

    #[test]
    fn clause_cap() {
        let f = parse_formula("(a1 & a2 & a3) | (b1 & b2 & b3) | (c1 & c2 & c3)").unwrap();
        let mut c = Clausifier::new([&f], 10);
        assert_eq!(c.clausify(&f, Origin::NegatedConjecture), Err(ClausifyError::TooManyClauses(10)));
        let mut c = Clausifier::new([&f], 27);
        assert_eq!(c.clausify(&f, Origin::NegatedConjecture).unwrap().len(), 27);
    }

    #[test]
    fn constants_fold_away() {
        assert!(clausify(&parse_formula("$true").unwrap()).unwrap().clauses.is_empty());
        let set = clausify(&parse_formula("$false").unwrap()).unwrap();
        assert!(set.clauses[0].is_empty());
    }
}
