//! Brute-force finite model evaluation.
//!
//! Enumerates every interpretation of a small signature over domains
//! `{0..n}` and evaluates sentences in each. Equality is identity on the
//! domain. This is a verification oracle: it is exhaustive and slow, and it
//! refuses signatures whose interpretation count exceeds [`MODEL_BUDGET`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::fol::{Formula, Term};
use crate::tptp::Signature;

/// Largest supported domain size.
pub const MAX_DOMAIN: usize = 4;

/// Upper bound on the total number of interpretations enumerated by one query.
pub const MODEL_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("domain size {0} is outside 1..={MAX_DOMAIN}")]
    DomainSize(usize),
    #[error("{required} interpretations needed, budget is {MODEL_BUDGET}")]
    Budget { required: u128 },
    #[error("symbol `{0}` is not interpreted")]
    Uncovered(String),
    #[error("formula has free variable `{0}`")]
    FreeVariable(String),
}

/// A finite interpretation. Tables are indexed by the arguments read as a
/// base-`size` number, first argument most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub size: usize,
    pub functions: BTreeMap<String, (usize, Vec<usize>)>,
    pub predicates: BTreeMap<String, (usize, Vec<bool>)>,
}

impl Interpretation {
    pub fn function(&self, name: &str, args: &[usize]) -> Option<usize> {
        let (arity, table) = self.functions.get(name)?;
        (*arity == args.len()).then(|| table[index(args, self.size)])
    }

    pub fn holds(&self, name: &str, args: &[usize]) -> Option<bool> {
        let (arity, table) = self.predicates.get(name)?;
        (*arity == args.len()).then(|| table[index(args, self.size)])
    }
}

fn index(args: &[usize], size: usize) -> usize {
    args.iter().fold(0, |acc, a| acc * size + a)
}

fn tuples(arity: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = size.pow(arity as u32);
    (0..count).map(move |mut i| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = i % size;
            i /= size;
        }
        t
    })
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain: {{{}}}", (0..self.size).map(|d| d.to_string()).collect::<Vec<_>>().join(", "))?;
        for (name, (arity, table)) in &self.functions {
            if *arity == 0 {
                writeln!(f, "{name} = {}", table[0])?;
            } else {
                let cells: Vec<String> = tuples(*arity, self.size)
                    .zip(table)
                    .map(|(t, v)| format!("{name}({}) = {v}", join(&t)))
                    .collect();
                writeln!(f, "{}", cells.join(", "))?;
            }
        }
        for (name, (arity, table)) in &self.predicates {
            let members: Vec<String> = tuples(*arity, self.size)
                .zip(table)
                .filter(|(_, b)| **b)
                .map(|(t, _)| if *arity == 0 { "()".to_string() } else { format!("({})", join(&t)) })
                .collect();
            writeln!(f, "{name} = {{{}}}", members.join(", "))?;
        }
        Ok(())
    }
}

fn join(t: &[usize]) -> String {
    t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Number of interpretations of `sig` over a domain of `size` elements.
pub fn model_count(sig: &Signature, size: usize) -> u128 {
    let n = size as u128;
    let mut total: u128 = 1;
    let cells = |arity: usize| n.checked_pow(arity as u32);
    for &arity in sig.functions.values() {
        let c = cells(arity).and_then(|c| u32::try_from(c).ok());
        total = match c.and_then(|c| n.checked_pow(c)) {
            Some(v) => total.saturating_mul(v),
            None => u128::MAX,
        };
    }
    for &arity in sig.predicates.values() {
        let c = cells(arity).and_then(|c| u32::try_from(c).ok());
        total = match c.and_then(|c| 2u128.checked_pow(c)) {
            Some(v) => total.saturating_mul(v),
            None => u128::MAX,
        };
    }
    total
}

fn check_budget(sig: &Signature, max_domain: usize) -> Result<(), OracleError> {
    if max_domain == 0 || max_domain > MAX_DOMAIN {
        return Err(OracleError::DomainSize(max_domain));
    }
    let required = (1..=max_domain).fold(0u128, |acc, n| acc.saturating_add(model_count(sig, n)));
    if required > MODEL_BUDGET {
        return Err(OracleError::Budget { required });
    }
    Ok(())
}

/// Tarskian truth value of a sentence in `m`.
pub fn eval(f: &Formula, m: &Interpretation) -> Result<bool, OracleError> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(OracleError::FreeVariable(v));
    }
    let mut sig = Signature::default();
    sig.add_formula(f);
    for (name, arity) in &sig.functions {
        match m.functions.get(name) {
            Some((a, _)) if a == arity => {}
            _ => return Err(OracleError::Uncovered(name.clone())),
        }
    }
    for (name, arity) in &sig.predicates {
        match m.predicates.get(name) {
            Some((a, _)) if a == arity => {}
            _ => return Err(OracleError::Uncovered(name.clone())),
        }
    }
    let mut env = Vec::new();
    Ok(eval_in(f, m, &mut env))
}

fn eval_term(t: &Term, m: &Interpretation, env: &[(String, usize)]) -> usize {
    match t {
        Term::Var(v) => env.iter().rev().find(|(n, _)| n == v).map(|(_, d)| *d).unwrap(),
        Term::App(f, args) => {
            let vals: Vec<usize> = args.iter().map(|a| eval_term(a, m, env)).collect();
            m.function(f, &vals).unwrap()
        }
    }
}

fn eval_in(f: &Formula, m: &Interpretation, env: &mut Vec<(String, usize)>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p, args) => {
            let vals: Vec<usize> = args.iter().map(|a| eval_term(a, m, env)).collect();
            m.holds(p, &vals).unwrap()
        }
        Formula::Eq(l, r) => eval_term(l, m, env) == eval_term(r, m, env),
        Formula::Not(g) => !eval_in(g, m, env),
        Formula::And(gs) => gs.iter().all(|g| eval_in(g, m, env)),
        Formula::Or(gs) => gs.iter().any(|g| eval_in(g, m, env)),
        Formula::Implies(a, b) => !eval_in(a, m, env) || eval_in(b, m, env),
        Formula::Iff(a, b) => eval_in(a, m, env) == eval_in(b, m, env),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let universal = matches!(f, Formula::Forall(..));
            for d in 0..m.size {
                env.push((v.clone(), d));
                let val = eval_in(g, m, env);
                env.pop();
                if val != universal {
                    return !universal;
                }
            }
            universal
        }
    }
}

/// Every interpretation of `sig` for domain sizes `1..=max_domain`, in a
/// fixed order: by size, then by table contents as an odometer whose last
/// cell turns fastest.
pub fn all_models(
    sig: &Signature,
    max_domain: usize,
) -> Result<impl Iterator<Item = Interpretation>, OracleError> {
    check_budget(sig, max_domain)?;
    let sig = sig.clone();
    Ok((1..=max_domain).flat_map(move |n| {
        let mut e = Enumerator::new(&sig, n);
        let mut first = true;
        std::iter::from_fn(move || {
            if first {
                first = false;
            } else if !e.advance() {
                return None;
            }
            Some(e.interpretation())
        })
    }))
}

/// Is `lhs ↔ rhs` true in every enumerated model (of `premises`, if given)?
pub fn equiv_on_models(
    lhs: &Formula,
    rhs: &Formula,
    premises: Option<&[Formula]>,
    max_domain: usize,
) -> Result<bool, OracleError> {
    Ok(distinguishing_model(lhs, rhs, premises, max_domain)?.is_none())
}

/// A model of `premises` in which `lhs` and `rhs` differ, if any.
pub fn distinguishing_model(
    lhs: &Formula,
    rhs: &Formula,
    premises: Option<&[Formula]>,
    max_domain: usize,
) -> Result<Option<Interpretation>, OracleError> {
    let premises = premises.unwrap_or(&[]);
    search(premises, max_domain, |v| v[0] != v[1], &[lhs, rhs])
}

/// A model of `premises` falsifying `conjecture`, if one exists within the bound.
pub fn countermodel(
    premises: &[Formula],
    conjecture: &Formula,
    max_domain: usize,
) -> Result<Option<Interpretation>, OracleError> {
    search(premises, max_domain, |v| !v[0], &[conjecture])
}

/// Does every model of `premises` up to `max_domain` satisfy `conjecture`?
pub fn entails_on_models(
    premises: &[Formula],
    conjecture: &Formula,
    max_domain: usize,
) -> Result<bool, OracleError> {
    Ok(countermodel(premises, conjecture, max_domain)?.is_none())
}

fn search(
    premises: &[Formula],
    max_domain: usize,
    hit: impl Fn(&[bool]) -> bool,
    queries: &[&Formula],
) -> Result<Option<Interpretation>, OracleError> {
    let premise = Formula::and(premises.to_vec());
    let mut sig = Signature::default();
    sig.add_formula(&premise);
    for q in queries {
        sig.add_formula(q);
    }
    for f in std::iter::once(&premise).chain(queries.iter().copied()) {
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(OracleError::FreeVariable(v));
        }
    }
    check_budget(&sig, max_domain)?;
    for n in 1..=max_domain {
        let mut e = Enumerator::new(&sig, n);
        let premise = Compiled::new(&premise, &e);
        let compiled: Vec<Compiled> = queries.iter().map(|f| Compiled::new(f, &e)).collect();
        let slots = compiled.iter().map(|c| c.slots).chain([premise.slots]).max().unwrap_or(0);
        let mut env = vec![0; slots];
        let mut values = vec![false; compiled.len()];
        loop {
            if premise.eval(&e, &mut env) {
                for (v, c) in values.iter_mut().zip(&compiled) {
                    *v = c.eval(&e, &mut env);
                }
                if hit(&values) {
                    return Ok(Some(e.interpretation()));
                }
            }
            if !e.advance() {
                break;
            }
        }
    }
    Ok(None)
}

/// Odometer over all table cells of a signature at a fixed domain size.
struct Enumerator {
    size: usize,
    cells: Vec<u8>,
    /// Per-cell range: `size` for function cells, 2 for predicate cells.
    ranges: Vec<u8>,
    functions: Vec<(String, usize, usize)>,
    predicates: Vec<(String, usize, usize)>,
}

impl Enumerator {
    fn new(sig: &Signature, size: usize) -> Self {
        let mut ranges = Vec::new();
        let mut functions = Vec::new();
        let mut predicates = Vec::new();
        for (name, &arity) in &sig.functions {
            functions.push((name.clone(), arity, ranges.len()));
            ranges.extend(std::iter::repeat_n(size as u8, size.pow(arity as u32)));
        }
        for (name, &arity) in &sig.predicates {
            predicates.push((name.clone(), arity, ranges.len()));
            ranges.extend(std::iter::repeat_n(2u8, size.pow(arity as u32)));
        }
        Enumerator {
            size,
            cells: vec![0; ranges.len()],
            ranges,
            functions,
            predicates,
        }
    }

    fn advance(&mut self) -> bool {
        for i in (0..self.cells.len()).rev() {
            self.cells[i] += 1;
            if self.cells[i] < self.ranges[i] {
                return true;
            }
            self.cells[i] = 0;
        }
        false
    }

    fn interpretation(&self) -> Interpretation {
        let n = self.size;
        let functions = self
            .functions
            .iter()
            .map(|(name, arity, off)| {
                let len = n.pow(*arity as u32);
                let vals = self.cells[*off..off + len].iter().map(|&c| c as usize).collect();
                (name.clone(), (*arity, vals))
            })
            .collect();
        let predicates = self
            .predicates
            .iter()
            .map(|(name, arity, off)| {
                let len = n.pow(*arity as u32);
                let vals = self.cells[*off..off + len].iter().map(|&c| c == 1).collect();
                (name.clone(), (*arity, vals))
            })
            .collect();
        Interpretation { size: n, functions, predicates }
    }
}

/// A sentence with symbols resolved to cell offsets and variables to slots.
struct Compiled {
    root: Node,
    slots: usize,
}

enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

enum Node {
    Const(bool),
    Pred(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Quant(bool, usize, Box<Node>),
}

impl Compiled {
    fn new(f: &Formula, e: &Enumerator) -> Self {
        let fun: BTreeMap<&str, usize> = e.functions.iter().map(|(n, _, o)| (n.as_str(), *o)).collect();
        let pred: BTreeMap<&str, usize> = e.predicates.iter().map(|(n, _, o)| (n.as_str(), *o)).collect();
        let mut scope: Vec<(String, usize)> = Vec::new();
        let mut slots = 0;
        let root = compile(f, &fun, &pred, &mut scope, &mut slots);
        Compiled { root, slots }
    }

    fn eval(&self, e: &Enumerator, env: &mut [usize]) -> bool {
        eval_node(&self.root, e, env)
    }
}

fn compile_term(t: &Term, fun: &BTreeMap<&str, usize>, scope: &[(String, usize)]) -> CTerm {
    match t {
        Term::Var(v) => CTerm::Var(scope.iter().rev().find(|(n, _)| n == v).unwrap().1),
        Term::App(f, args) => CTerm::App(fun[f.as_str()], args.iter().map(|a| compile_term(a, fun, scope)).collect()),
    }
}

fn compile(
    f: &Formula,
    fun: &BTreeMap<&str, usize>,
    pred: &BTreeMap<&str, usize>,
    scope: &mut Vec<(String, usize)>,
    slots: &mut usize,
) -> Node {
    match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Atom(p, args) => Node::Pred(
            pred[p.as_str()],
            args.iter().map(|a| compile_term(a, fun, scope)).collect(),
        ),
        Formula::Eq(l, r) => Node::Eq(compile_term(l, fun, scope), compile_term(r, fun, scope)),
        Formula::Not(g) => Node::Not(Box::new(compile(g, fun, pred, scope, slots))),
        Formula::And(gs) => Node::And(gs.iter().map(|g| compile(g, fun, pred, scope, slots)).collect()),
        Formula::Or(gs) => Node::Or(gs.iter().map(|g| compile(g, fun, pred, scope, slots)).collect()),
        Formula::Implies(a, b) => Node::Implies(
            Box::new(compile(a, fun, pred, scope, slots)),
            Box::new(compile(b, fun, pred, scope, slots)),
        ),
        Formula::Iff(a, b) => Node::Iff(
            Box::new(compile(a, fun, pred, scope, slots)),
            Box::new(compile(b, fun, pred, scope, slots)),
        ),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let slot = *slots;
            *slots += 1;
            scope.push((v.clone(), slot));
            let body = compile(g, fun, pred, scope, slots);
            scope.pop();
            Node::Quant(matches!(f, Formula::Forall(..)), slot, Box::new(body))
        }
    }
}

fn eval_cterm(t: &CTerm, e: &Enumerator, env: &[usize]) -> usize {
    match t {
        CTerm::Var(s) => env[*s],
        CTerm::App(off, args) => {
            let idx = args.iter().fold(0, |acc, a| acc * e.size + eval_cterm(a, e, env));
            e.cells[off + idx] as usize
        }
    }
}

fn eval_node(n: &Node, e: &Enumerator, env: &mut [usize]) -> bool {
    match n {
        Node::Const(b) => *b,
        Node::Pred(off, args) => {
            let idx = args.iter().fold(0, |acc, a| acc * e.size + eval_cterm(a, e, env));
            e.cells[off + idx] == 1
        }
        Node::Eq(l, r) => eval_cterm(l, e, env) == eval_cterm(r, e, env),
        Node::Not(g) => !eval_node(g, e, env),
        Node::And(gs) => gs.iter().all(|g| eval_node(g, e, env)),
        Node::Or(gs) => gs.iter().any(|g| eval_node(g, e, env)),
        Node::Implies(a, b) => !eval_node(a, e, env) || eval_node(b, e, env),
        Node::Iff(a, b) => eval_node(a, e, env) == eval_node(b, e, env),
        Node::Quant(universal, slot, body) => {
            for d in 0..e.size {
                env[*slot] = d;
                if eval_node(body, e, env) != *universal {
                    return !universal;
                }
            }
            *universal
        }
    }
}
