//! Given-clause saturation with binary resolution and factoring.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use super::clause::{factors, resolvents, subsumes, CTerm, Clause, Literal, Origin, Sym, Symbols, EQ};
use super::clausify::ClauseSet;
use super::Limits;
use crate::tptp::AxiomId;

/// Which limit stopped the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    Time,
    Clauses,
}

/// A refutation: the ancestry of the empty clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    /// Axioms among the leaves of the ancestry, ascending.
    pub used_axioms: Vec<AxiomId>,
    /// Numbered inference listing ending in `$false`.
    pub trace: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Refutation(Proof),
    Saturated,
    ResourceOut(Resource),
}

struct State<'a> {
    symbols: &'a Symbols,
    eq: Option<Sym>,
    store: Vec<Clause>,
    active: Vec<usize>,
    passive: BinaryHeap<Reverse<(usize, usize)>>,
    max_clauses: usize,
    deadline: Instant,
}

enum Step {
    Continue,
    Stop(Outcome),
}

impl State<'_> {
    /// Adds a clause unless it is a tautology or forward-subsumed by an
    /// active clause.
    fn add(&mut self, clause: Clause) -> Step {
        if clause.is_tautology(self.eq) {
            return Step::Continue;
        }
        if self.active.iter().any(|&a| subsumes(&self.store[a], &clause)) {
            return Step::Continue;
        }
        let id = self.store.len();
        let empty = clause.is_empty();
        self.passive.push(Reverse((clause.weight(), id)));
        self.store.push(clause);
        if empty {
            return Step::Stop(Outcome::Refutation(self.proof(id)));
        }
        if self.store.len() > self.max_clauses {
            return Step::Stop(Outcome::ResourceOut(Resource::Clauses));
        }
        Step::Continue
    }

    fn proof(&self, empty: usize) -> Proof {
        let mut seen = BTreeSet::new();
        let mut stack = vec![empty];
        while let Some(id) = stack.pop() {
            if seen.insert(id) {
                stack.extend(self.store[id].origin.parents());
            }
        }
        let number: BTreeMap<usize, usize> = seen.iter().enumerate().map(|(i, id)| (*id, i + 1)).collect();
        let mut used = BTreeSet::new();
        let mut trace = String::new();
        for &id in &seen {
            let c = &self.store[id];
            let how = match &c.origin {
                Origin::Axiom(a) => {
                    used.insert(*a);
                    format!("axiom {a}")
                }
                Origin::NegatedConjecture => "negated conjecture".to_string(),
                Origin::Equality => "equality axiom".to_string(),
                Origin::Resolution(x, y) => format!("resolution {},{}", number[x], number[y]),
                Origin::Factor(x) => format!("factoring {}", number[x]),
            };
            let _ = writeln!(trace, "{}. {} [{how}]", number[&id], c.display(self.symbols));
        }
        Proof { used_axioms: used.into_iter().collect(), trace }
    }

    fn run(&mut self) -> Outcome {
        while let Some(Reverse((_, given))) = self.passive.pop() {
            if Instant::now() >= self.deadline {
                return Outcome::ResourceOut(Resource::Time);
            }
            let clause = self.store[given].clone();
            if self.active.iter().any(|&a| subsumes(&self.store[a], &clause)) {
                continue;
            }
            let store = &self.store;
            self.active.retain(|&a| !subsumes(&clause, &store[a]));
            self.active.push(given);

            for lits in factors(&clause) {
                if let Step::Stop(o) = self.add(Clause::new(lits, Origin::Factor(given))) {
                    return o;
                }
            }
            let partners = self.active.clone();
            for (n, partner) in partners.into_iter().enumerate() {
                if n % 64 == 0 && Instant::now() >= self.deadline {
                    return Outcome::ResourceOut(Resource::Time);
                }
                let other = self.store[partner].clone();
                for lits in resolvents(&clause, &other) {
                    if let Step::Stop(o) = self.add(Clause::new(lits, Origin::Resolution(given, partner))) {
                        return o;
                    }
                }
            }
        }
        Outcome::Saturated
    }
}

/// Saturates `set` under `limits`. Equality axioms are added when `=`
/// occurs in some clause.
pub fn saturate(set: &ClauseSet, limits: &Limits) -> Outcome {
    saturate_until(set, limits, Instant::now() + Duration::from_secs_f64(limits.seconds.max(0.0)))
}

pub(crate) fn saturate_until(set: &ClauseSet, limits: &Limits, deadline: Instant) -> Outcome {
    let mut symbols = set.symbols.clone();
    let eq = set
        .clauses
        .iter()
        .flat_map(|c| c.literals.iter())
        .any(|l| set.symbols.name(l.pred) == EQ)
        .then(|| symbols.intern(EQ));
    let mut input = set.clauses.clone();
    if let Some(eq) = eq {
        input.extend(equality_axioms(&set.clauses, eq));
    }
    let mut state = State {
        symbols: &symbols,
        eq,
        store: Vec::new(),
        active: Vec::new(),
        passive: BinaryHeap::new(),
        max_clauses: limits.max_clauses,
        deadline,
    };
    for c in input {
        if let Step::Stop(o) = state.add(c) {
            return o;
        }
    }
    state.run()
}

fn collect_symbols(t: &CTerm, funs: &mut BTreeMap<Sym, usize>) {
    if let CTerm::App(f, args) = t {
        funs.insert(*f, args.len());
        for a in args {
            collect_symbols(a, funs);
        }
    }
}

/// Reflexivity, symmetry, transitivity and congruence for every function
/// and predicate symbol occurring in `clauses`.
fn equality_axioms(clauses: &[Clause], eq: Sym) -> Vec<Clause> {
    let mut funs = BTreeMap::new();
    let mut preds = BTreeMap::new();
    for l in clauses.iter().flat_map(|c| c.literals.iter()) {
        if l.pred != eq {
            preds.insert(l.pred, l.args.len());
        }
        for a in &l.args {
            collect_symbols(a, &mut funs);
        }
    }
    let v = CTerm::Var;
    let lit = |positive, pred, args| Literal { positive, pred, args };
    let mut out = vec![
        Clause::new(vec![lit(true, eq, vec![v(0), v(0)])], Origin::Equality),
        Clause::new(
            vec![lit(false, eq, vec![v(0), v(1)]), lit(true, eq, vec![v(1), v(0)])],
            Origin::Equality,
        ),
        Clause::new(
            vec![
                lit(false, eq, vec![v(0), v(1)]),
                lit(false, eq, vec![v(1), v(2)]),
                lit(true, eq, vec![v(0), v(2)]),
            ],
            Origin::Equality,
        ),
    ];
    // Argument i is X vs Y; the rest are shared variables 2.. .
    let args_with = |arity: usize, i: usize, at: u32| -> Vec<CTerm> {
        (0..arity)
            .map(|k| if k == i { v(at) } else { v(2 + k as u32) })
            .collect()
    };
    for (&f, &arity) in &funs {
        for i in 0..arity {
            out.push(Clause::new(
                vec![
                    lit(false, eq, vec![v(0), v(1)]),
                    lit(true, eq, vec![CTerm::App(f, args_with(arity, i, 0)), CTerm::App(f, args_with(arity, i, 1))]),
                ],
                Origin::Equality,
            ));
        }
    }
    for (&p, &arity) in &preds {
        for i in 0..arity {
            out.push(Clause::new(
                vec![
                    lit(false, eq, vec![v(0), v(1)]),
                    lit(false, p, args_with(arity, i, 0)),
                    lit(true, p, args_with(arity, i, 1)),
                ],
                Origin::Equality,
            ));
        }
    }
    out
}
