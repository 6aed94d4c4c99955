//! TPTP FOF input and output.
//!
//! Only the untyped `fof` dialect is accepted. Free variables in a statement
//! are universally closed at parse time, so every parsed formula is a
//! sentence.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::{tptp_name, Formula, Term};
use crate::normal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TptpError {
    #[error("{file}:{line}:{col}: syntax error: expected {expected}, found {found}")]
    Syntax {
        file: String,
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{file}:{line}: `{symbol}` used with arity {first} and {second}")]
    ArityClash {
        file: String,
        line: usize,
        symbol: String,
        first: usize,
        second: usize,
    },
    #[error("{file}:{line}: unsupported {what}")]
    Unsupported {
        file: String,
        line: usize,
        what: String,
    },
    #[error("{file}:{line}: duplicate statement name `{name}`")]
    DuplicateName { file: String, line: usize, name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomRole {
    Rule,
    NonRule,
}

/// Stable 1-based position of an axiom in its ontology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AxiomId(pub usize);

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceLocation {
    pub file: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub id: AxiomId,
    pub name: String,
    pub formula: Formula,
    pub role: AxiomRole,
    pub source: SourceLocation,
}

/// Predicate and function arities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub predicates: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, usize>,
}

impl Signature {
    pub fn of_formula(f: &Formula) -> Signature {
        let mut sig = Signature::default();
        sig.add_formula(f);
        sig
    }

    /// Records every symbol of `f`. Conflicting arities keep the first one seen.
    pub fn add_formula(&mut self, f: &Formula) {
        let _ = self.check_formula(f);
    }

    /// Records every symbol of `f`, reporting the first arity clash.
    pub fn check_formula(&mut self, f: &Formula) -> Result<(), (String, usize, usize)> {
        let mut err = None;
        f.walk(&mut |g| match g {
            Formula::Atom(p, args) => {
                let n = *self.predicates.entry(p.clone()).or_insert(args.len());
                if n != args.len() && err.is_none() {
                    err = Some((p.clone(), n, args.len()));
                }
                for t in args {
                    if let Err(e) = self.check_term(t) {
                        err.get_or_insert(e);
                    }
                }
            }
            Formula::Eq(l, r) => {
                for t in [l, r] {
                    if let Err(e) = self.check_term(t) {
                        err.get_or_insert(e);
                    }
                }
            }
            _ => {}
        });
        err.map_or(Ok(()), Err)
    }

    fn check_term(&mut self, t: &Term) -> Result<(), (String, usize, usize)> {
        if let Term::App(name, args) = t {
            let n = *self.functions.entry(name.clone()).or_insert(args.len());
            if n != args.len() {
                return Err((name.clone(), n, args.len()));
            }
            for a in args {
                self.check_term(a)?;
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &Signature) {
        for (k, v) in &other.predicates {
            self.predicates.entry(k.clone()).or_insert(*v);
        }
        for (k, v) in &other.functions {
            self.functions.entry(k.clone()).or_insert(*v);
        }
    }
}

/// The fixed premise set: named axioms in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    pub name: String,
    pub axioms: Vec<Axiom>,
    pub signature: Signature,
}

impl Ontology {
    pub fn new(name: impl Into<String>) -> Self {
        Ontology {
            name: name.into(),
            axioms: Vec::new(),
            signature: Signature::default(),
        }
    }

    /// Builds an ontology from `(name, formula)` pairs, assigning ids 1..n.
    /// Formulas are universally closed.
    pub fn from_formulas<I, S>(name: impl Into<String>, items: I) -> Self
    where
        I: IntoIterator<Item = (S, Formula)>,
        S: Into<String>,
    {
        let mut ont = Ontology::new(name);
        for (n, f) in items {
            ont.push(n, f.universal_closure(), SourceLocation { file: String::new(), line: 0 });
        }
        ont
    }

    fn push(&mut self, name: impl Into<String>, formula: Formula, source: SourceLocation) {
        self.signature.add_formula(&formula);
        let role = normal::classify_role(&formula);
        self.axioms.push(Axiom {
            id: AxiomId(self.axioms.len() + 1),
            name: name.into(),
            formula,
            role,
            source,
        });
    }

    pub fn axiom(&self, id: AxiomId) -> Option<&Axiom> {
        self.axioms.get(id.0.checked_sub(1)?)
    }

    pub fn by_name(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    /// A copy without the axiom `id`. Remaining axioms keep their ids.
    pub fn without(&self, id: AxiomId) -> Ontology {
        Ontology {
            name: self.name.clone(),
            axioms: self.axioms.iter().filter(|a| a.id != id).cloned().collect(),
            signature: self.signature.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }
}

/// One `fof(name, role, formula).` statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub name: String,
    pub role: String,
    pub formula: Formula,
    pub line: usize,
}

/// Parses every FOF statement in `text`, whatever its role.
pub fn parse_statements(text: &str, file: &str) -> Result<Vec<Statement>, TptpError> {
    let mut p = Parser::new(text, file);
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.at_end() {
            break;
        }
        out.push(p.statement()?);
    }
    Ok(out)
}

/// Parses an ontology. Statements with role `axiom` or `hypothesis` become
/// premises; any other role is rejected.
pub fn parse_ontology(text: &str, name: &str) -> Result<Ontology, TptpError> {
    parse_ontology_from(text, name, name)
}

fn parse_ontology_from(text: &str, name: &str, file: &str) -> Result<Ontology, TptpError> {
    let statements = parse_statements(text, file)?;
    let mut ont = Ontology::new(name);
    for st in statements {
        if !matches!(st.role.as_str(), "axiom" | "hypothesis") {
            return Err(TptpError::Unsupported {
                file: file.to_string(),
                line: st.line,
                what: format!("role `{}` (only axiom/hypothesis are premises)", st.role),
            });
        }
        if ont.by_name(&st.name).is_some() {
            return Err(TptpError::DuplicateName {
                file: file.to_string(),
                line: st.line,
                name: st.name,
            });
        }
        if let Err((symbol, first, second)) = ont.signature.check_formula(&st.formula) {
            return Err(TptpError::ArityClash {
                file: file.to_string(),
                line: st.line,
                symbol,
                first,
                second,
            });
        }
        let source = SourceLocation { file: file.to_string(), line: st.line };
        ont.push(st.name, st.formula, source);
    }
    Ok(ont)
}

/// Reads and parses an ontology file; the ontology is named after the file stem.
pub fn load_ontology(path: &Path) -> Result<Ontology, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(path.to_path_buf(), e))?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("ontology")
        .to_string();
    Ok(parse_ontology_from(&text, &name, &path.display().to_string())?)
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error(transparent)]
    Parse(#[from] TptpError),
}

/// Parses a single formula (no `fof(...)` wrapper), closing free variables.
pub fn parse_formula(text: &str) -> Result<Formula, TptpError> {
    let mut p = Parser::new(text, "<formula>");
    let f = p.formula()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("end of input"));
    }
    Ok(f.universal_closure())
}

/// Renders a prover problem: every premise as an axiom plus one conjecture.
pub fn render_problem(premises: &Ontology, conjecture: &Formula) -> String {
    let mut out = String::new();
    for ax in &premises.axioms {
        out.push_str(&format!("fof({}, axiom, {}).\n", tptp_name(&ax.name), ax.formula));
    }
    let mut name = "test".to_string();
    while premises.by_name(&name).is_some() {
        name.push('_');
    }
    out.push_str(&format!("fof({name}, conjecture, {conjecture}).\n"));
    out
}

/// Renders just the premises, one `fof(..., axiom, ...)` per line.
pub fn render_ontology(ont: &Ontology) -> String {
    ont.axioms
        .iter()
        .map(|ax| format!("fof({}, axiom, {}).\n", tptp_name(&ax.name), ax.formula))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LowerWord(String),
    UpperWord(String),
    Quoted(String),
    Dollar(String),
    Number(String),
    Distinct(String),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LowerWord(s) | Tok::UpperWord(s) | Tok::Dollar(s) | Tok::Number(s) => {
                write!(f, "`{s}`")
            }
            Tok::Quoted(s) => write!(f, "`'{s}'`"),
            Tok::Distinct(s) => write!(f, "`\"{s}\"`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

// Longest first so that prefixes do not shadow longer operators.
const PUNCT: &[&str] = &[
    "<~>", "<=>", "=>", "<=", "~|", "~&", "!=", "(", ")", "[", "]", ",", ".", ":", "&", "|", "~",
    "!", "?", "=",
];

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    file: String,
    peeked: Option<(Tok, usize, usize)>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, file: &str) -> Self {
        Parser {
            src: text.as_bytes(),
            text,
            pos: 0,
            file: file.to_string(),
            peeked: None,
        }
    }

    fn at_end(&mut self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn skip_ws(&mut self) {
        if self.peeked.is_some() {
            return;
        }
        loop {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.src[self.pos..].starts_with(b"%") {
                while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if self.src[self.pos..].starts_with(b"/*") {
                match self.text[self.pos + 2..].find("*/") {
                    Some(end) => self.pos += end + 4,
                    None => self.pos = self.src.len(),
                }
            } else {
                break;
            }
        }
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.text[..pos.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let col = pos - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, col)
    }

    fn lex(&mut self) -> Result<(Tok, usize, usize), TptpError> {
        self.skip_ws();
        let start = self.pos;
        if start >= self.src.len() {
            return Ok((Tok::Eof, start, start));
        }
        let c = self.src[start];
        let word_end = |from: usize| {
            let mut i = from;
            while i < self.src.len() && (self.src[i].is_ascii_alphanumeric() || self.src[i] == b'_') {
                i += 1;
            }
            i
        };
        let tok = if c.is_ascii_lowercase() {
            let end = word_end(start);
            self.pos = end;
            Tok::LowerWord(self.text[start..end].to_string())
        } else if c.is_ascii_uppercase() {
            let end = word_end(start);
            self.pos = end;
            Tok::UpperWord(self.text[start..end].to_string())
        } else if c.is_ascii_digit() {
            let mut end = start;
            while end < self.src.len() && self.src[end].is_ascii_digit() {
                end += 1;
            }
            self.pos = end;
            Tok::Number(self.text[start..end].to_string())
        } else if c == b'$' {
            let end = word_end(start + 1);
            self.pos = end;
            Tok::Dollar(self.text[start..end].to_string())
        } else if c == b'\'' || c == b'"' {
            let mut out = String::new();
            let mut i = start + 1;
            loop {
                match self.src.get(i) {
                    None => {
                        self.pos = i;
                        return Err(self.error_at(start, "closing quote", "end of input"));
                    }
                    Some(b'\\') => {
                        if let Some(&n) = self.src.get(i + 1) {
                            out.push(n as char);
                        }
                        i += 2;
                    }
                    Some(&q) if q == c => {
                        i += 1;
                        break;
                    }
                    Some(_) => {
                        let ch = self.text[i..].chars().next().unwrap();
                        out.push(ch);
                        i += ch.len_utf8();
                    }
                }
            }
            self.pos = i;
            if c == b'\'' {
                Tok::Quoted(out)
            } else {
                Tok::Distinct(out)
            }
        } else {
            let rest = &self.text[start..];
            match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    self.pos += p.len();
                    Tok::Punct(p)
                }
                None => {
                    let ch = rest.chars().next().unwrap();
                    return Err(self.error_at(start, "a token", &format!("`{ch}`")));
                }
            }
        };
        Ok((tok, start, self.pos))
    }

    fn peek(&mut self) -> Tok {
        if self.peeked.is_none() {
            match self.lex() {
                Ok(t) => self.peeked = Some(t),
                // Lexing errors resurface from `next`.
                Err(_) => return Tok::Punct("<invalid>"),
            }
        }
        self.peeked.as_ref().unwrap().0.clone()
    }

    fn peek_start(&mut self) -> usize {
        self.peek();
        self.peeked.as_ref().map_or(self.pos, |p| p.1)
    }

    fn next(&mut self) -> Result<Tok, TptpError> {
        match self.peeked.take() {
            Some((t, _, _)) => Ok(t),
            None => self.lex().map(|t| t.0),
        }
    }

    fn error(&mut self, expected: &str) -> TptpError {
        let start = self.peek_start();
        let found = match self.peek() {
            Tok::Punct("<invalid>") => match self.lex() {
                Err(e) => return e,
                Ok(t) => t.0.to_string(),
            },
            t => t.to_string(),
        };
        self.error_at(start, expected, &found)
    }

    fn error_at(&self, pos: usize, expected: &str, found: &str) -> TptpError {
        let (line, col) = self.line_col(pos);
        TptpError::Syntax {
            file: self.file.clone(),
            line,
            col,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    fn expect(&mut self, p: &'static str) -> Result<(), TptpError> {
        if self.peek() == Tok::Punct(p) {
            self.next()?;
            Ok(())
        } else {
            Err(self.error(&format!("`{p}`")))
        }
    }

    fn statement(&mut self) -> Result<Statement, TptpError> {
        let start = self.peek_start();
        let (line, _) = self.line_col(start);
        match self.peek() {
            Tok::LowerWord(w) if w == "fof" => {
                self.next()?;
            }
            Tok::LowerWord(w) if matches!(w.as_str(), "cnf" | "tff" | "thf" | "tcf" | "include") => {
                return Err(TptpError::Unsupported {
                    file: self.file.clone(),
                    line,
                    what: format!("`{w}` statement (only fof is accepted)"),
                });
            }
            _ => return Err(self.error("`fof`")),
        }
        self.expect("(")?;
        let name = match self.next()? {
            Tok::LowerWord(s) | Tok::Quoted(s) | Tok::Number(s) | Tok::UpperWord(s) => s,
            t => return Err(self.error_at(start, "a statement name", &t.to_string())),
        };
        self.expect(",")?;
        let role = match self.peek() {
            Tok::LowerWord(s) => {
                self.next()?;
                s
            }
            _ => return Err(self.error("a formula role")),
        };
        self.expect(",")?;
        let formula = self.formula()?;
        if self.peek() == Tok::Punct(",") {
            self.next()?;
            self.skip_annotations()?;
        }
        self.expect(")")?;
        self.expect(".")?;
        Ok(Statement {
            name,
            role,
            formula: formula.universal_closure(),
            line,
        })
    }

    /// Skips balanced annotation terms up to the closing `)` of the statement.
    fn skip_annotations(&mut self) -> Result<(), TptpError> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Punct("(") | Tok::Punct("[") => depth += 1,
                Tok::Punct(")") | Tok::Punct("]") if depth == 0 => return Ok(()),
                Tok::Punct(")") | Tok::Punct("]") => depth -= 1,
                Tok::Eof => return Err(self.error("`)`")),
                _ => {}
            }
            self.next()?;
        }
    }

    fn formula(&mut self) -> Result<Formula, TptpError> {
        let first = self.unitary()?;
        match self.peek() {
            Tok::Punct(op @ ("&" | "|")) => {
                let mut items = vec![first];
                while self.peek() == Tok::Punct(op) {
                    self.next()?;
                    items.push(self.unitary()?);
                }
                if let Tok::Punct(p @ ("&" | "|" | "=>" | "<=" | "<=>" | "<~>" | "~|" | "~&")) =
                    self.peek()
                {
                    return Err(self.error(&format!("`)` (mixing `{op}` with `{p}` needs parentheses)")));
                }
                Ok(if op == "&" { Formula::and(items) } else { Formula::or(items) })
            }
            Tok::Punct(op @ ("=>" | "<=" | "<=>" | "<~>" | "~|" | "~&")) => {
                self.next()?;
                let second = self.unitary()?;
                Ok(match op {
                    "=>" => Formula::implies(first, second),
                    "<=" => Formula::implies(second, first),
                    "<=>" => Formula::iff(first, second),
                    "<~>" => Formula::not(Formula::iff(first, second)),
                    "~|" => Formula::not(Formula::or(vec![first, second])),
                    _ => Formula::not(Formula::and(vec![first, second])),
                })
            }
            _ => Ok(first),
        }
    }

    fn unitary(&mut self) -> Result<Formula, TptpError> {
        match self.peek() {
            Tok::Punct("(") => {
                self.next()?;
                let f = self.formula()?;
                self.expect(")")?;
                Ok(f)
            }
            Tok::Punct("~") => {
                self.next()?;
                Ok(Formula::not(self.unitary()?))
            }
            Tok::Punct(q @ ("!" | "?")) => {
                self.next()?;
                self.expect("[")?;
                let mut vars = Vec::new();
                loop {
                    match self.peek() {
                        Tok::UpperWord(v) => {
                            self.next()?;
                            vars.push(v);
                        }
                        _ => return Err(self.error("a variable")),
                    }
                    match self.peek() {
                        Tok::Punct(",") => {
                            self.next()?;
                        }
                        Tok::Punct("]") => {
                            self.next()?;
                            break;
                        }
                        _ => return Err(self.error("`,` or `]`")),
                    }
                }
                self.expect(":")?;
                let body = self.unitary()?;
                Ok(vars.into_iter().rev().fold(body, |acc, v| {
                    if q == "!" {
                        Formula::forall(v, acc)
                    } else {
                        Formula::exists(v, acc)
                    }
                }))
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> Result<Formula, TptpError> {
        match self.peek() {
            Tok::Dollar(d) if d == "$true" || d == "$false" => {
                self.next()?;
                return Ok(if d == "$true" { Formula::True } else { Formula::False });
            }
            Tok::Dollar(d) => {
                let start = self.peek_start();
                let (line, _) = self.line_col(start);
                return Err(TptpError::Unsupported {
                    file: self.file.clone(),
                    line,
                    what: format!("defined symbol `{d}`"),
                });
            }
            _ => {}
        }
        let start = self.peek_start();
        let lhs = self.term()?;
        match self.peek() {
            Tok::Punct("=") => {
                self.next()?;
                Ok(Formula::eq(lhs, self.term()?))
            }
            Tok::Punct("!=") => {
                self.next()?;
                Ok(Formula::not(Formula::eq(lhs, self.term()?)))
            }
            _ => match lhs {
                Term::App(p, args) => Ok(Formula::Atom(p, args)),
                Term::Var(v) => Err(self.error_at(start, "an atom", &format!("variable `{v}`"))),
            },
        }
    }

    fn term(&mut self) -> Result<Term, TptpError> {
        match self.peek() {
            Tok::UpperWord(v) => {
                self.next()?;
                Ok(Term::Var(v))
            }
            Tok::LowerWord(f) | Tok::Quoted(f) => {
                self.next()?;
                let mut args = Vec::new();
                if self.peek() == Tok::Punct("(") {
                    self.next()?;
                    loop {
                        args.push(self.term()?);
                        match self.peek() {
                            Tok::Punct(",") => {
                                self.next()?;
                            }
                            Tok::Punct(")") => {
                                self.next()?;
                                break;
                            }
                            _ => return Err(self.error("`,` or `)`")),
                        }
                    }
                }
                Ok(Term::App(f, args))
            }
            Tok::Number(n) => {
                self.next()?;
                Ok(Term::constant(n))
            }
            Tok::Distinct(s) => {
                self.next()?;
                Ok(Term::constant(format!("\"{s}\"")))
            }
            _ => Err(self.error("a term")),
        }
    }
}
