//! Propositional tautology checking over atomized modal formulas.
//!
//! Subformulas headed by `□` or `▷` and variables are treated as opaque
//! propositional atoms. Checking is by Shannon expansion: atoms are assigned
//! one at a time and the formula is evaluated three-valued after each
//! assignment, so a branch stops as soon as its value is determined.

use crate::syntax::Formula;
use std::collections::HashMap;

enum Node {
    Const(bool),
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
}

struct Compiled {
    nodes: Vec<Node>,
    atoms: usize,
}

fn compile(f: &Formula, nodes: &mut Vec<Node>, atoms: &mut HashMap<Formula, usize>) -> usize {
    let node = match f {
        Formula::Top => Node::Const(true),
        Formula::Bot => Node::Const(false),
        Formula::Var(_) | Formula::Box(_) | Formula::Rhd(..) => {
            let n = atoms.len();
            Node::Atom(*atoms.entry(f.clone()).or_insert(n))
        }
        Formula::Neg(a) => Node::Not(compile(a, nodes, atoms)),
        Formula::And(a, b) => Node::And(compile(a, nodes, atoms), compile(b, nodes, atoms)),
        Formula::Or(a, b) => Node::Or(compile(a, nodes, atoms), compile(b, nodes, atoms)),
        Formula::Imp(a, b) => Node::Imp(compile(a, nodes, atoms), compile(b, nodes, atoms)),
    };
    nodes.push(node);
    nodes.len() - 1
}

impl Compiled {
    fn new(f: &Formula) -> Compiled {
        let mut nodes = Vec::new();
        let mut atoms = HashMap::new();
        compile(f, &mut nodes, &mut atoms);
        Compiled { nodes, atoms: atoms.len() }
    }

    /// Kleene evaluation; `None` means not yet determined.
    fn eval(&self, assignment: &[Option<bool>], vals: &mut Vec<Option<bool>>) -> Option<bool> {
        vals.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Const(b) => Some(b),
                Node::Atom(i) => assignment[i],
                Node::Not(a) => vals[a].map(|b| !b),
                Node::And(a, b) => match (vals[a], vals[b]) {
                    (Some(false), _) | (_, Some(false)) => Some(false),
                    (Some(true), Some(true)) => Some(true),
                    _ => None,
                },
                Node::Or(a, b) => match (vals[a], vals[b]) {
                    (Some(true), _) | (_, Some(true)) => Some(true),
                    (Some(false), Some(false)) => Some(false),
                    _ => None,
                },
                Node::Imp(a, b) => match (vals[a], vals[b]) {
                    (Some(false), _) | (_, Some(true)) => Some(true),
                    (Some(true), Some(false)) => Some(false),
                    _ => None,
                },
            };
            vals.push(v);
        }
        *vals.last().expect("a compiled formula has a root")
    }

    fn valid_from(&self, next: usize, assignment: &mut Vec<Option<bool>>, vals: &mut Vec<Option<bool>>) -> bool {
        match self.eval(assignment, vals) {
            Some(v) => v,
            None => [false, true].into_iter().all(|b| {
                assignment[next] = Some(b);
                let ok = self.valid_from(next + 1, assignment, vals);
                assignment[next] = None;
                ok
            }),
        }
    }
}

/// Whether `f` is a propositional tautology when every `□`- and
/// `▷`-subformula is read as an atom.
pub fn is_tautology(f: &Formula) -> bool {
    let c = Compiled::new(f);
    let mut assignment = vec![None; c.atoms];
    let mut vals = Vec::with_capacity(c.nodes.len());
    c.valid_from(0, &mut assignment, &mut vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    /// Independent reference: the full truth table over the atoms.
    fn truth_table(f: &Formula) -> bool {
        fn atoms(f: &Formula, out: &mut Vec<Formula>) {
            match f {
                Formula::Var(_) | Formula::Box(_) | Formula::Rhd(..) => {
                    if !out.contains(f) {
                        out.push(f.clone())
                    }
                }
                _ => f.children().for_each(|c| atoms(c, out)),
            }
        }
        fn eval(f: &Formula, atoms: &[Formula], row: u32) -> bool {
            match f {
                Formula::Top => true,
                Formula::Bot => false,
                Formula::Neg(a) => !eval(a, atoms, row),
                Formula::And(a, b) => eval(a, atoms, row) && eval(b, atoms, row),
                Formula::Or(a, b) => eval(a, atoms, row) || eval(b, atoms, row),
                Formula::Imp(a, b) => !eval(a, atoms, row) || eval(b, atoms, row),
                _ => row >> atoms.iter().position(|x| x == f).unwrap() & 1 == 1,
            }
        }
        let mut v = Vec::new();
        atoms(f, &mut v);
        (0..1u32 << v.len()).all(|row| eval(f, &v, row))
    }

    #[test]
    fn recognises_tautologies_over_modal_atoms() {
        for s in [
            "p -> p",
            "[]p | ~[]p",
            "(p |> q) & (q |> r) -> p |> q",
            "((a -> b) -> a) -> a",
            "bot -> q",
            "~~(p |> q) -> p |> q",
        ] {
            assert!(is_tautology(&parse(s).unwrap()), "{s}");
        }
        for s in ["p", "[]p -> p", "p |> q -> q |> p", "[](p -> p) -> bot"] {
            assert!(!is_tautology(&parse(s).unwrap()), "{s}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn formula() -> impl Strategy<Value = Formula> {
            let leaf = prop_oneof![
                Just(Formula::Top),
                Just(Formula::Bot),
                prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::var),
            ];
            leaf.prop_recursive(4, 24, 2, |inner| {
                prop_oneof![
                    inner.clone().prop_map(Formula::not),
                    inner.clone().prop_map(Formula::boxed),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                    (inner.clone(), inner).prop_map(|(a, b)| Formula::rhd(a, b)),
                ]
            })
        }

        proptest! {
            #[test]
            fn agrees_with_truth_tables(f in formula()) {
                prop_assert_eq!(is_tautology(&f), truth_table(&f));
                let excluded_middle = Formula::or(f.clone(), Formula::not(f));
                prop_assert!(is_tautology(&excluded_middle));
            }
        }
    }
}
