//! First-order syntax trees and the structural operations every other module
//! builds on: free variables, closures, alpha-canonical renaming and
//! capture-avoiding substitution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A first-order term. Constants are zero-arity applications.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    fn collect_vars(&self, out: &mut Vec<String>, bound: &[String]) {
        match self {
            Term::Var(v) => {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out, bound)),
        }
    }

    fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    fn rename(&self, env: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Var(v) => Term::Var(env.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename(env)).collect()),
        }
    }

    fn substitute(&self, mapping: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => mapping.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(mapping)).collect())
            }
        }
    }
}

/// A first-order formula.
///
/// `And`/`Or` are n-ary and hold at least two children when built through
/// [`Formula::and`] / [`Formula::or`]. Grouping is kept as written: a nested
/// conjunction stays a single child of its parent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// Quantifier kind, used for prefixes such as the ones produced by localization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn bind(self, var: impl Into<String>, body: Formula) -> Formula {
        match self {
            Quantifier::Forall => Formula::Forall(var.into(), Box::new(body)),
            Quantifier::Exists => Formula::Exists(var.into(), Box::new(body)),
        }
    }

    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(pred.into(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction of `items`. An empty list is `$true`, a singleton is its element.
    pub fn and(mut items: Vec<Formula>) -> Self {
        match items.len() {
            0 => Formula::True,
            1 => items.pop().unwrap(),
            _ => Formula::And(items),
        }
    }

    /// Disjunction of `items`. An empty list is `$false`, a singleton is its element.
    pub fn or(mut items: Vec<Formula>) -> Self {
        match items.len() {
            0 => Formula::False,
            1 => items.pop().unwrap(),
            _ => Formula::Or(items),
        }
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Self {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// Wraps `body` in the given quantifier prefix, outermost first.
    pub fn quantified(prefix: &[(Quantifier, String)], body: Formula) -> Self {
        prefix
            .iter()
            .rev()
            .fold(body, |acc, (q, v)| q.bind(v.clone(), acc))
    }

    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Eq(..) | Formula::True | Formula::False => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom(..) | Formula::Eq(..)),
            _ => false,
        }
    }

    /// Direct subformulas, in order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => Vec::new(),
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
        }
    }

    /// The subformula reached by following child indices from the root.
    pub fn at_path(&self, path: &[usize]) -> Option<&Formula> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Free variables in order of first occurrence (left-to-right, depth-first).
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut out, &mut bound);
        out
    }

    fn collect_free(&self, out: &mut Vec<String>, bound: &mut Vec<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => args.iter().for_each(|t| t.collect_vars(out, bound)),
            Formula::Eq(l, r) => {
                l.collect_vars(out, bound);
                r.collect_vars(out, bound);
            }
            Formula::Not(f) => f.collect_free(out, bound),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(out, bound)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(out, bound);
                b.collect_free(out, bound);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(out, bound);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Does `name` occur free anywhere in this formula?
    pub fn has_free(&self, name: &str) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom(_, args) => args.iter().any(|t| t.contains_var(name)),
            Formula::Eq(l, r) => l.contains_var(name) || r.contains_var(name),
            Formula::Not(f) => f.has_free(name),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(|f| f.has_free(name)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.has_free(name) || b.has_free(name),
            Formula::Forall(v, f) | Formula::Exists(v, f) => v != name && f.has_free(name),
        }
    }

    /// `(f)^∀`: binds every free variable, in first-occurrence order.
    pub fn universal_closure(&self) -> Formula {
        self.closure(Quantifier::Forall)
    }

    /// `(f)^∃`: existential counterpart of [`Formula::universal_closure`].
    pub fn existential_closure(&self) -> Formula {
        self.closure(Quantifier::Exists)
    }

    fn closure(&self, q: Quantifier) -> Formula {
        let prefix: Vec<_> = self.free_vars().into_iter().map(|v| (q, v)).collect();
        Formula::quantified(&prefix, self.clone())
    }

    /// Renames bound variables to `V1, V2, ...` in pre-order of their binders.
    ///
    /// Two sentences are alpha-equivalent iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Formula {
        let mut counter = 0usize;
        self.canonicalize(&BTreeMap::new(), &mut counter)
    }

    fn canonicalize(&self, env: &BTreeMap<String, String>, counter: &mut usize) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|t| t.rename(env)).collect())
            }
            Formula::Eq(l, r) => Formula::Eq(l.rename(env), r.rename(env)),
            Formula::Not(f) => Formula::not(f.canonicalize(env, counter)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.canonicalize(env, counter)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.canonicalize(env, counter)).collect()),
            Formula::Implies(a, b) => {
                let a = a.canonicalize(env, counter);
                Formula::implies(a, b.canonicalize(env, counter))
            }
            Formula::Iff(a, b) => {
                let a = a.canonicalize(env, counter);
                Formula::iff(a, b.canonicalize(env, counter))
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                *counter += 1;
                let fresh = format!("V{counter}");
                let mut inner = env.clone();
                inner.insert(v.clone(), fresh.clone());
                let body = f.canonicalize(&inner, counter);
                match self {
                    Formula::Forall(..) => Formula::forall(fresh, body),
                    _ => Formula::exists(fresh, body),
                }
            }
        }
    }

    /// Capture-avoiding substitution of free variables.
    pub fn substitute(&self, mapping: &BTreeMap<String, Term>) -> Formula {
        if mapping.is_empty() {
            return self.clone();
        }
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|t| t.substitute(mapping)).collect())
            }
            Formula::Eq(l, r) => Formula::Eq(l.substitute(mapping), r.substitute(mapping)),
            Formula::Not(f) => Formula::not(f.substitute(mapping)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(mapping)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(mapping)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.substitute(mapping), b.substitute(mapping)),
            Formula::Iff(a, b) => Formula::iff(a.substitute(mapping), b.substitute(mapping)),
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                let mut inner: BTreeMap<String, Term> = mapping
                    .iter()
                    .filter(|(k, _)| *k != v && f.has_free(k))
                    .map(|(k, t)| (k.clone(), t.clone()))
                    .collect();
                if inner.is_empty() {
                    return self.clone();
                }
                let captures = inner.values().any(|t| t.contains_var(v));
                let mut binder = v.clone();
                if captures {
                    let mut taken: BTreeSet<String> = f.all_var_names();
                    for t in inner.values() {
                        let mut vs = Vec::new();
                        t.collect_vars(&mut vs, &[]);
                        taken.extend(vs);
                    }
                    taken.extend(inner.keys().cloned());
                    binder = fresh_name(v, &taken);
                    inner.insert(v.clone(), Term::Var(binder.clone()));
                }
                let body = f.substitute(&inner);
                match self {
                    Formula::Forall(..) => Formula::forall(binder, body),
                    _ => Formula::exists(binder, body),
                }
            }
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            Formula::Atom(_, args) => {
                for t in args {
                    let mut vs = Vec::new();
                    t.collect_vars(&mut vs, &[]);
                    out.extend(vs);
                }
            }
            Formula::Eq(l, r) => {
                let mut vs = Vec::new();
                l.collect_vars(&mut vs, &[]);
                r.collect_vars(&mut vs, &[]);
                out.extend(vs);
            }
            _ => {}
        });
        out
    }

    /// Binders in pre-order.
    pub fn quantifiers(&self) -> Vec<(Quantifier, String)> {
        let mut out = Vec::new();
        self.walk(&mut |f| match f {
            Formula::Forall(v, _) => out.push((Quantifier::Forall, v.clone())),
            Formula::Exists(v, _) => out.push((Quantifier::Exists, v.clone())),
            _ => {}
        });
        out
    }

    /// Pre-order visit of every subformula.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    /// Number of formula nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }
}

/// `base`, or `base` with the smallest numeric suffix not in `taken`.
pub(crate) fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.contains(n))
        .unwrap()
}

fn is_lower_word(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_upper_word(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// TPTP rendering of a functor, predicate or statement name.
pub fn tptp_name(name: &str) -> String {
    if is_lower_word(name) || (!name.is_empty() && name.chars().all(|c| c.is_ascii_digit())) {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

/// TPTP rendering of a variable. Names that are not upper words get a `X_` prefix.
pub fn tptp_var(name: &str) -> String {
    if is_upper_word(name) {
        name.to_string()
    } else {
        let cleaned: String = name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        format!("X_{cleaned}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", tptp_var(v)),
            Term::App(name, args) => {
                write!(f, "{}", tptp_name(name))?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// TPTP FOF syntax. Every non-atomic operand is parenthesised, so the
/// output parses back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(g: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match g {
                Formula::And(_)
                | Formula::Or(_)
                | Formula::Implies(..)
                | Formula::Iff(..)
                | Formula::Forall(..)
                | Formula::Exists(..) => write!(f, "({g})"),
                _ => write!(f, "{g}"),
            }
        }
        match self {
            Formula::True => write!(f, "$true"),
            Formula::False => write!(f, "$false"),
            Formula::Atom(p, args) => write!(f, "{}", Term::App(p.clone(), args.clone())),
            Formula::Eq(l, r) => write!(f, "{l} = {r}"),
            Formula::Not(g) => match &**g {
                Formula::Eq(l, r) => write!(f, "{l} != {r}"),
                _ => {
                    write!(f, "~ ")?;
                    operand(g, f)
                }
            },
            Formula::And(fs) | Formula::Or(fs) => {
                let op = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    operand(g, f)?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                operand(a, f)?;
                write!(f, " => ")?;
                operand(b, f)
            }
            Formula::Iff(a, b) => {
                operand(a, f)?;
                write!(f, " <=> ")?;
                operand(b, f)
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                let (sym, q) = match self {
                    Formula::Forall(..) => ("!", Quantifier::Forall),
                    _ => ("?", Quantifier::Exists),
                };
                // Merge a run of same-kind binders into one `![X,Y]:` block.
                let mut vars = Vec::new();
                let mut cur = self;
                while let (Formula::Forall(v, b), Quantifier::Forall) | (Formula::Exists(v, b), Quantifier::Exists) = (cur, q) {
                    vars.push(tptp_var(v));
                    cur = b;
                }
                write!(f, "{sym}[{}] : ", vars.join(","))?;
                match cur {
                    Formula::Not(_)
                    | Formula::Forall(..)
                    | Formula::Exists(..)
                    | Formula::Atom(..)
                    | Formula::Eq(..)
                    | Formula::True
                    | Formula::False => write!(f, "{cur}"),
                    _ => write!(f, "({cur})"),
                }
            }
        }
    }
}
