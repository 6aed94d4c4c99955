//! Clause representation, unification and subsumption.

use std::collections::HashMap;
use std::fmt;

use crate::tptp::AxiomId;

/// Interned function or predicate symbol.
pub type Sym = u32;

/// Name table shared by all clauses of one problem.
#[derive(Debug, Clone, Default)]
pub struct Symbols {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

impl Symbols {
    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        let s = self.names.len() as Sym;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), s);
        s
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }
}

/// The reserved predicate symbol name for equality.
pub const EQ: &str = "=";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CTerm {
    Var(u32),
    App(Sym, Vec<CTerm>),
}

impl CTerm {
    fn max_var(&self) -> Option<u32> {
        match self {
            CTerm::Var(v) => Some(*v),
            CTerm::App(_, args) => args.iter().filter_map(CTerm::max_var).max(),
        }
    }

    fn weight(&self) -> usize {
        match self {
            CTerm::Var(_) => 1,
            CTerm::App(_, args) => 1 + args.iter().map(CTerm::weight).sum::<usize>(),
        }
    }

    fn shift(&self, by: u32) -> CTerm {
        match self {
            CTerm::Var(v) => CTerm::Var(v + by),
            CTerm::App(f, args) => CTerm::App(*f, args.iter().map(|a| a.shift(by)).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub pred: Sym,
    pub args: Vec<CTerm>,
}

impl Literal {
    pub fn complement(&self) -> Literal {
        Literal { positive: !self.positive, ..self.clone() }
    }

    fn shift(&self, by: u32) -> Literal {
        Literal {
            positive: self.positive,
            pred: self.pred,
            args: self.args.iter().map(|a| a.shift(by)).collect(),
        }
    }
}

/// Where a clause came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Axiom(AxiomId),
    NegatedConjecture,
    /// Equality axioms added by the prover.
    Equality,
    Resolution(usize, usize),
    Factor(usize),
}

impl Origin {
    pub fn parents(&self) -> Vec<usize> {
        match self {
            Origin::Resolution(a, b) => vec![*a, *b],
            Origin::Factor(a) => vec![*a],
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub origin: Origin,
}

impl Clause {
    /// Builds a clause with variables renumbered from 0 in order of first
    /// occurrence and duplicate literals removed.
    pub fn new(literals: Vec<Literal>, origin: Origin) -> Self {
        let mut map: HashMap<u32, u32> = HashMap::new();
        let mut out: Vec<Literal> = Vec::with_capacity(literals.len());
        for lit in literals {
            let lit = Literal {
                positive: lit.positive,
                pred: lit.pred,
                args: lit.args.iter().map(|a| renumber(a, &mut map)).collect(),
            };
            if !out.contains(&lit) {
                out.push(lit);
            }
        }
        Clause { literals: out, origin }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn var_count(&self) -> u32 {
        self.literals
            .iter()
            .flat_map(|l| l.args.iter())
            .filter_map(CTerm::max_var)
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn weight(&self) -> usize {
        self.literals
            .iter()
            .map(|l| 1 + l.args.iter().map(CTerm::weight).sum::<usize>())
            .sum()
    }

    /// Contains complementary literals, or a positive `t = t` alongside
    /// other literals. The unit `X = X` is kept: it is the reflexivity axiom.
    pub fn is_tautology(&self, eq: Option<Sym>) -> bool {
        self.literals.iter().enumerate().any(|(i, l)| {
            (Some(l.pred) == eq && l.positive && l.args[0] == l.args[1] && self.literals.len() > 1)
                || self.literals[i + 1..]
                    .iter()
                    .any(|m| m.pred == l.pred && m.positive != l.positive && m.args == l.args)
        })
    }

    pub fn display<'a>(&'a self, syms: &'a Symbols) -> ClauseDisplay<'a> {
        ClauseDisplay { clause: self, syms }
    }
}

fn renumber(t: &CTerm, map: &mut HashMap<u32, u32>) -> CTerm {
    match t {
        CTerm::Var(v) => {
            let next = map.len() as u32;
            CTerm::Var(*map.entry(*v).or_insert(next))
        }
        CTerm::App(f, args) => CTerm::App(*f, args.iter().map(|a| renumber(a, map)).collect()),
    }
}

pub struct ClauseDisplay<'a> {
    clause: &'a Clause,
    syms: &'a Symbols,
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clause.literals.is_empty() {
            return write!(f, "$false");
        }
        for (i, lit) in self.clause.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            if self.syms.name(lit.pred) == EQ {
                let op = if lit.positive { "=" } else { "!=" };
                write_term(f, &lit.args[0], self.syms)?;
                write!(f, " {op} ")?;
                write_term(f, &lit.args[1], self.syms)?;
            } else {
                if !lit.positive {
                    write!(f, "~")?;
                }
                write!(f, "{}", crate::fol::tptp_name(self.syms.name(lit.pred)))?;
                write_args(f, &lit.args, self.syms)?;
            }
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &CTerm, syms: &Symbols) -> fmt::Result {
    match t {
        CTerm::Var(v) => write!(f, "X{v}"),
        CTerm::App(s, args) => {
            write!(f, "{}", crate::fol::tptp_name(syms.name(*s)))?;
            write_args(f, args, syms)
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[CTerm], syms: &Symbols) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    write!(f, "(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write_term(f, a, syms)?;
    }
    write!(f, ")")
}

/// Triangular substitution over variables `0..n`.
#[derive(Debug, Clone)]
pub struct Subst {
    bindings: Vec<Option<CTerm>>,
}

impl Subst {
    pub fn new(vars: u32) -> Self {
        Subst { bindings: vec![None; vars as usize] }
    }

    fn walk<'a>(&'a self, t: &'a CTerm) -> &'a CTerm {
        let mut cur = t;
        while let CTerm::Var(v) = cur {
            match &self.bindings[*v as usize] {
                Some(b) => cur = b,
                None => break,
            }
        }
        cur
    }

    pub fn apply(&self, t: &CTerm) -> CTerm {
        match self.walk(t) {
            CTerm::Var(v) => CTerm::Var(*v),
            CTerm::App(f, args) => CTerm::App(*f, args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal {
            positive: l.positive,
            pred: l.pred,
            args: l.args.iter().map(|a| self.apply(a)).collect(),
        }
    }

    fn occurs(&self, v: u32, t: &CTerm) -> bool {
        match self.walk(t) {
            CTerm::Var(w) => *w == v,
            CTerm::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    pub fn unify(&mut self, a: &CTerm, b: &CTerm) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (CTerm::Var(x), CTerm::Var(y)) if x == y => true,
            (CTerm::Var(x), t) | (t, CTerm::Var(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.bindings[*x as usize] = Some(t.clone());
                true
            }
            (CTerm::App(f, fa), CTerm::App(g, ga)) => {
                f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    pub fn unify_args(&mut self, a: &[CTerm], b: &[CTerm]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.unify(x, y))
    }
}

/// All binary resolvents of `c` (variables kept) and `d` (variables shifted
/// past those of `c`).
pub fn resolvents(c: &Clause, d: &Clause) -> Vec<Vec<Literal>> {
    let shift = c.var_count();
    let d_lits: Vec<Literal> = d.literals.iter().map(|l| l.shift(shift)).collect();
    let total = shift + d.var_count();
    let mut out = Vec::new();
    for (i, l) in c.literals.iter().enumerate() {
        for (j, m) in d_lits.iter().enumerate() {
            if l.pred != m.pred || l.positive == m.positive {
                continue;
            }
            let mut s = Subst::new(total);
            if !s.unify_args(&l.args, &m.args) {
                continue;
            }
            let lits = c
                .literals
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, x)| s.apply_literal(x))
                .chain(
                    d_lits
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, x)| s.apply_literal(x)),
                )
                .collect();
            out.push(lits);
        }
    }
    out
}

/// Binary factors: unify two literals of the same sign and predicate.
pub fn factors(c: &Clause) -> Vec<Vec<Literal>> {
    let n = c.var_count();
    let mut out = Vec::new();
    for i in 0..c.literals.len() {
        for j in i + 1..c.literals.len() {
            let (l, m) = (&c.literals[i], &c.literals[j]);
            if l.pred != m.pred || l.positive != m.positive {
                continue;
            }
            let mut s = Subst::new(n);
            if s.unify_args(&l.args, &m.args) {
                out.push(
                    c.literals
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, x)| s.apply_literal(x))
                        .collect(),
                );
            }
        }
    }
    out
}

/// Does some substitution map every literal of `c` onto a literal of `d`?
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.literals.len() > d.literals.len() {
        return false;
    }
    let mut bindings: Vec<Option<CTerm>> = vec![None; c.var_count() as usize];
    match_from(&c.literals, &d.literals, &mut bindings)
}

fn match_from(rest: &[Literal], target: &[Literal], bindings: &mut Vec<Option<CTerm>>) -> bool {
    let Some((first, rest)) = rest.split_first() else {
        return true;
    };
    for cand in target {
        if cand.pred != first.pred || cand.positive != first.positive {
            continue;
        }
        let saved = bindings.clone();
        if first.args.iter().zip(&cand.args).all(|(p, t)| match_term(p, t, bindings))
            && match_from(rest, target, bindings)
        {
            return true;
        }
        *bindings = saved;
    }
    false
}

/// One-way matching: binds variables of `pattern` only.
fn match_term(pattern: &CTerm, t: &CTerm, bindings: &mut [Option<CTerm>]) -> bool {
    match pattern {
        CTerm::Var(v) => match &bindings[*v as usize] {
            Some(b) => b == t,
            None => {
                bindings[*v as usize] = Some(t.clone());
                true
            }
        },
        CTerm::App(f, args) => match t {
            CTerm::App(g, targs) if f == g && args.len() == targs.len() => {
                args.iter().zip(targs).all(|(a, b)| match_term(a, b, bindings))
            }
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> CTerm {
        CTerm::Var(i)
    }

    fn app(f: Sym, args: Vec<CTerm>) -> CTerm {
        CTerm::App(f, args)
    }

    fn lit(positive: bool, pred: Sym, args: Vec<CTerm>) -> Literal {
        Literal { positive, pred, args }
    }

    const P: Sym = 0;
    const Q: Sym = 1;
    const A: Sym = 2;
    const F: Sym = 3;

    #[test]
    fn unification_with_occurs_check() {
        let mut s = Subst::new(2);
        assert!(s.unify(&v(0), &app(F, vec![v(1)])));
        assert!(s.unify(&v(1), &app(A, vec![])));
        assert_eq!(s.apply(&v(0)), app(F, vec![app(A, vec![])]));
        let mut s = Subst::new(1);
        assert!(!s.unify(&v(0), &app(F, vec![v(0)])));
    }

    #[test]
    fn resolve_unit_against_clause() {
        let c = Clause::new(vec![lit(true, P, vec![app(A, vec![])])], Origin::NegatedConjecture);
        let d = Clause::new(
            vec![lit(false, P, vec![v(0)]), lit(true, Q, vec![v(0)])],
            Origin::NegatedConjecture,
        );
        let r = resolvents(&c, &d);
        assert_eq!(r, vec![vec![lit(true, Q, vec![app(A, vec![])])]]);
    }

    #[test]
    fn factoring_merges_unifiable_literals() {
        let c = Clause::new(
            vec![lit(true, P, vec![v(0)]), lit(true, P, vec![app(A, vec![])])],
            Origin::NegatedConjecture,
        );
        let f = factors(&c);
        assert_eq!(f.len(), 1);
        assert_eq!(Clause::new(f[0].clone(), Origin::Factor(0)).literals.len(), 1);
    }

    #[test]
    fn subsumption_is_one_way() {
        let general = Clause::new(vec![lit(true, P, vec![v(0)])], Origin::NegatedConjecture);
        let specific = Clause::new(
            vec![lit(true, P, vec![app(A, vec![])]), lit(true, Q, vec![v(0)])],
            Origin::NegatedConjecture,
        );
        assert!(subsumes(&general, &specific));
        assert!(!subsumes(&specific, &general));
        // p(X, X) does not subsume p(a, Y).
        let diag = Clause::new(vec![lit(true, P, vec![v(0), v(0)])], Origin::NegatedConjecture);
        let mixed = Clause::new(vec![lit(true, P, vec![app(A, vec![]), v(0)])], Origin::NegatedConjecture);
        assert!(!subsumes(&diag, &mixed));
    }

    #[test]
    fn tautologies() {
        let c = Clause::new(
            vec![lit(true, P, vec![v(0)]), lit(false, P, vec![v(0)])],
            Origin::NegatedConjecture,
        );
        assert!(c.is_tautology(None));
        let refl = Clause::new(vec![lit(true, Q, vec![v(0), v(0)])], Origin::Equality);
        assert!(!refl.is_tautology(Some(Q)));
        let weakened = Clause::new(
            vec![lit(true, Q, vec![v(0), v(0)]), lit(true, P, vec![v(1)])],
            Origin::Equality,
        );
        assert!(weakened.is_tautology(Some(Q)));
        assert!(!weakened.is_tautology(None));
    }

    #[test]
    fn variables_are_renumbered() {
        let c = Clause::new(vec![lit(true, P, vec![v(7), v(3), v(7)])], Origin::NegatedConjecture);
        assert_eq!(c.literals[0].args, vec![v(0), v(1), v(0)]);
        assert_eq!(c.var_count(), 2);
    }
}
