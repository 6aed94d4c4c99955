#![allow(dead_code)]

use std::path::PathBuf;

use ontotest::tptp::{load_ontology, Ontology};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn ontology(name: &str) -> Ontology {
    load_ontology(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every fixture that is an ontology (the `*_pair.p` files are equivalence checks).
pub fn fixture_ontologies() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".p") && !n.ends_with("_pair.p"))
        .collect();
    names.sort();
    names
}

/// Runs the command line in-process and returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = ontotest::cli::main_with(std::iter::once("ontotest").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Random sentences over p/1, q/2, f/1, a, b and equality, with quantifier
/// depth at most `max_qdepth`. Variable names repeat on purpose so that
/// shadowing occurs.
pub mod gen {
    use ontotest::fol::{Formula, Term};
    use rand::Rng;

    const VARS: [&str; 3] = ["X", "Y", "Z"];

    fn term(rng: &mut impl Rng, bound: &[String], depth: usize) -> Term {
        match rng.gen_range(0..6) {
            0..=2 if !bound.is_empty() => Term::var(bound[rng.gen_range(0..bound.len())].clone()),
            3 if depth > 0 => Term::app("f", vec![term(rng, bound, depth - 1)]),
            4 => Term::constant("b"),
            _ => Term::constant("a"),
        }
    }

    fn atom(rng: &mut impl Rng, bound: &[String]) -> Formula {
        match rng.gen_range(0..10) {
            0..=3 => Formula::atom("p", vec![term(rng, bound, 1)]),
            4..=6 => Formula::atom("q", vec![term(rng, bound, 1), term(rng, bound, 1)]),
            7 | 8 => Formula::eq(term(rng, bound, 1), term(rng, bound, 1)),
            _ if rng.gen_bool(0.5) => Formula::True,
            _ => Formula::False,
        }
    }

    fn formula(rng: &mut impl Rng, bound: &mut Vec<String>, qdepth: usize, size: usize) -> Formula {
        if size == 0 {
            return atom(rng, bound);
        }
        let sub = size - 1;
        match rng.gen_range(0..9) {
            0 => atom(rng, bound),
            1 => Formula::not(formula(rng, bound, qdepth, sub)),
            2 | 3 => {
                let n = rng.gen_range(2..=3);
                let items = (0..n).map(|_| formula(rng, bound, qdepth, sub / n)).collect();
                if rng.gen_bool(0.5) {
                    Formula::And(items)
                } else {
                    Formula::Or(items)
                }
            }
            4 => Formula::implies(formula(rng, bound, qdepth, sub / 2), formula(rng, bound, qdepth, sub / 2)),
            5 => Formula::iff(formula(rng, bound, qdepth, sub / 2), formula(rng, bound, qdepth, sub / 2)),
            _ if qdepth > 0 => {
                let v = VARS[rng.gen_range(0..VARS.len())].to_string();
                bound.push(v.clone());
                let body = formula(rng, bound, qdepth - 1, sub);
                bound.pop();
                if rng.gen_bool(0.5) {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
            _ => Formula::not(formula(rng, bound, qdepth, sub)),
        }
    }

    /// A sentence of roughly `size` connectives.
    pub fn sentence(rng: &mut impl Rng, max_qdepth: usize, size: usize) -> Formula {
        formula(rng, &mut Vec::new(), max_qdepth, size)
    }
}
