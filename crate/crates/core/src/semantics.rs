//! Evaluation machinery shared by both relational semantics.
//!
//! Formulas are compiled into a straight-line [`Program`] whose
//! instructions compute extensions (sets of worlds), so that a formula
//! can be evaluated under many valuations without re-walking the tree.

use crate::bitset::BitSet;
use crate::syntax::Formula;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// A violated well-formedness clause, with the offending worlds by name.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("a frame needs at least one world")]
    NoWorlds,
    #[error("world `{0}` is listed twice")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("R is not transitive: {x} R {y} and {y} R {z} but not {x} R {z}")]
    NotTransitive { x: String, y: String, z: String },
    #[error("R is not conversely well-founded: there is a cycle through `{0}`")]
    Cycle(String),
    #[error("{y} S_{x} … requires {x} R {y}")]
    SOutsideR { x: String, y: String },
    #[error("empty generator for {y} S_{x}")]
    EmptyGenerator { x: String, y: String },
    #[error("the generators for {y} S_{x} are not an antichain")]
    NotAntichain { x: String, y: String },
}

/// Worlds and the accessibility relation `R`, common to both frame kinds.
///
/// `R` is transitive and irreflexive; on a finite set this is the same as
/// transitive and conversely well-founded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Skeleton {
    names: Vec<String>,
    r: Vec<BitSet>,
}

impl Skeleton {
    pub fn new(names: Vec<String>, r: Vec<BitSet>) -> Result<Skeleton, FrameError> {
        let n = names.len();
        if n == 0 {
            return Err(FrameError::NoWorlds);
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(FrameError::DuplicateWorld(a.clone()));
            }
        }
        assert_eq!(r.len(), n, "one successor set per world");
        let sk = Skeleton { names, r };
        for x in 0..n {
            if let Some(y) = sk.r[x].iter().find(|&y| y >= n) {
                return Err(FrameError::UnknownWorld(format!("#{y}")));
            }
            for y in sk.r[x].iter() {
                if let Some(z) = sk.r[y].difference(&sk.r[x]).first() {
                    return Err(FrameError::NotTransitive {
                        x: sk.name(x).into(),
                        y: sk.name(y).into(),
                        z: sk.name(z).into(),
                    });
                }
            }
        }
        // With transitivity in place, any cycle shows up as a loop.
        if let Some(x) = (0..n).find(|&x| sk.r[x].contains(x)) {
            return Err(FrameError::Cycle(sk.name(x).into()));
        }
        Ok(sk)
    }

    /// A skeleton on worlds `w0, w1, …` from a relation already known to be
    /// a strict partial order.
    pub(crate) fn from_order(r: Vec<BitSet>) -> Skeleton {
        let names = (0..r.len()).map(|i| format!("w{i}")).collect();
        Skeleton { names, r }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, FrameError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| FrameError::UnknownWorld(name.into()))
    }

    pub fn successors(&self, x: usize) -> &BitSet {
        &self.r[x]
    }

    pub fn relates(&self, x: usize, y: usize) -> bool {
        self.r[x].contains(y)
    }

    /// All pairs of `R`, ordered by index.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |x| self.r[x].iter().map(move |y| (x, y)))
    }

    /// The set of the named worlds.
    pub fn set_of(&self, names: &[String]) -> Result<BitSet, FrameError> {
        names.iter().map(|n| self.index_of(n)).collect()
    }

    /// Names of the worlds in `set`, by index.
    pub fn names_of(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }
}

/// Orders world names naturally (`w2` before `w10`) and rejects
/// duplicates; file loaders use this as the canonical world order.
pub fn canonical_world_order(mut names: Vec<String>) -> Result<Vec<String>, FrameError> {
    fn split(s: &str) -> (&str, Option<u64>) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        (&s[..cut], s[cut..].parse().ok())
    }
    names.sort_by(|a, b| {
        let (pa, na) = split(a);
        let (pb, nb) = split(b);
        pa.cmp(pb).then(na.cmp(&nb)).then_with(|| a.cmp(b))
    });
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(FrameError::DuplicateWorld(w[0].clone()));
    }
    if names.is_empty() {
        return Err(FrameError::NoWorlds);
    }
    Ok(names)
}

/// Builds `R` from named pairs over a fixed world list.
pub(crate) fn relation_from_pairs(names: &[String], pairs: &[(String, String)]) -> Result<Vec<BitSet>, FrameError> {
    let idx = |w: &String| names.iter().position(|n| n == w).ok_or_else(|| FrameError::UnknownWorld(w.clone()));
    let mut r = vec![BitSet::default(); names.len()];
    for (x, y) in pairs {
        r[idx(x)?].insert(idx(y)?);
    }
    Ok(r)
}

/// Reads a valuation given by world names.
pub(crate) fn valuation_from_names(
    sk: &Skeleton,
    val: &BTreeMap<String, Vec<String>>,
) -> Result<Valuation, FrameError> {
    val.iter().map(|(p, ws)| Ok((p.clone(), sk.set_of(ws)?))).collect()
}

/// A valuation by world names, as in the JSON model formats.
pub fn valuation_to_names(sk: &Skeleton, val: &Valuation) -> BTreeMap<String, Vec<String>> {
    val.iter().map(|(p, ws)| (p.clone(), sk.names_of(ws))).collect()
}

/// A finite structure in which `□` and `▷` can be evaluated.
pub trait Structure {
    fn world_count(&self) -> usize;

    /// `R[x]`.
    fn successors(&self, x: usize) -> &BitSet;

    /// Whether `y` is related by `S_x` to some subset of `target`; for
    /// Veltman frames, whether `y S_x z` for some `z ∈ target`.
    fn interprets(&self, x: usize, y: usize, target: &BitSet) -> bool;
}

/// Truth sets of propositional variables. Variables not listed are false
/// everywhere.
pub type Valuation = BTreeMap<String, BitSet>;

#[derive(Debug, Clone, Copy)]
enum Op {
    Top,
    Bot,
    Var(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Box(usize),
    Rhd(usize, usize),
}

/// A compiled list of formulas with shared subformulas.
#[derive(Debug, Clone)]
pub struct Program {
    ops: Vec<Op>,
    vars: Vec<String>,
    roots: Vec<usize>,
}

impl Program {
    pub fn new<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Program {
        let mut p = Program { ops: Vec::new(), vars: Vec::new(), roots: Vec::new() };
        let mut seen = HashMap::new();
        for f in formulas {
            let r = p.compile(f, &mut seen);
            p.roots.push(r);
        }
        p
    }

    fn compile(&mut self, f: &Formula, seen: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = seen.get(f) {
            return i;
        }
        let mut c = |g: &Formula| self.compile(g, seen);
        let op = match f {
            Formula::Top => Op::Top,
            Formula::Bot => Op::Bot,
            Formula::Var(v) => {
                let i = self.vars.iter().position(|w| w == v).unwrap_or_else(|| {
                    self.vars.push(v.clone());
                    self.vars.len() - 1
                });
                Op::Var(i)
            }
            Formula::Neg(a) => Op::Not(c(a)),
            Formula::Box(a) => Op::Box(c(a)),
            Formula::And(a, b) => {
                let a = c(a);
                Op::And(a, c(b))
            }
            Formula::Or(a, b) => {
                let a = c(a);
                Op::Or(a, c(b))
            }
            Formula::Imp(a, b) => {
                let a = c(a);
                Op::Imp(a, c(b))
            }
            Formula::Rhd(a, b) => {
                let a = c(a);
                Op::Rhd(a, c(b))
            }
        };
        self.ops.push(op);
        seen.insert(f.clone(), self.ops.len() - 1);
        self.ops.len() - 1
    }

    /// Variables in order of first occurrence; valuations passed to
    /// [`Program::run`] are indexed the same way.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Evaluates every instruction; afterwards `root_extension` reads the
    /// results. `buf` is reused between calls to avoid allocation.
    pub fn run<S: Structure + ?Sized>(&self, s: &S, vals: &[BitSet], buf: &mut Vec<BitSet>) {
        let n = s.world_count();
        let all = BitSet::full(n);
        buf.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Top => all.clone(),
                Op::Bot => BitSet::with_capacity(n),
                Op::Var(i) => vals[i].intersection(&all),
                Op::Not(a) => buf[a].complement(n),
                Op::And(a, b) => buf[a].intersection(&buf[b]),
                Op::Or(a, b) => buf[a].union(&buf[b]),
                Op::Imp(a, b) => buf[a].complement(n).union(&buf[b]),
                Op::Box(a) => (0..n).filter(|&x| s.successors(x).is_subset(&buf[a])).collect(),
                Op::Rhd(a, b) => (0..n)
                    .filter(|&x| s.successors(x).intersection(&buf[a]).iter().all(|y| s.interprets(x, y, &buf[b])))
                    .collect(),
            };
            buf.push(v);
        }
    }

    pub fn root_extension<'b>(&self, i: usize, buf: &'b [BitSet]) -> &'b BitSet {
        &buf[self.roots[i]]
    }

    /// Runs the program under a named valuation and returns the
    /// extension of every root.
    pub fn extensions<S: Structure + ?Sized>(&self, s: &S, val: &Valuation) -> Vec<BitSet> {
        let vals: Vec<BitSet> = self.vars.iter().map(|v| val.get(v).cloned().unwrap_or_default()).collect();
        let mut buf = Vec::with_capacity(self.ops.len());
        self.run(s, &vals, &mut buf);
        self.roots.iter().map(|&r| buf[r].clone()).collect()
    }
}

/// The set of worlds where `f` holds.
pub fn extension<S: Structure + ?Sized>(s: &S, val: &Valuation, f: &Formula) -> BitSet {
    Program::new([f]).extensions(s, val).pop().expect("one root")
}

/// Outcome of checking validity on a frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// A valuation and a world where the formula fails.
    Refuted {
        valuation: Valuation,
        world: usize,
    },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Raised when exhaustive valuation enumeration would exceed its budget.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("checking validity needs 2^{exponent} valuations, over the budget of 2^{limit}")]
pub struct ValuationBudget {
    pub exponent: u32,
    pub limit: u32,
}

/// Default cap on the number of valuations enumerated, as a power of two.
pub const DEFAULT_VALUATION_BITS: u32 = 24;

/// Checks `f` under every valuation of its variables on `s`.
///
/// The number of valuations is `2^(worlds · variables)`; if that exponent
/// is above `limit_bits` nothing is evaluated and an error is returned.
/// Valuations are tried in increasing binary order (world `w` of variable
/// `i` is bit `i·worlds + w`), so the reported counterexample is the first
/// one in that order.
pub fn check_validity<S: Structure + ?Sized>(s: &S, f: &Formula, limit_bits: u32) -> Result<Validity, ValuationBudget> {
    let prog = Program::new([f]);
    let n = s.world_count();
    let k = prog.vars().len();
    let exponent = (n * k) as u32;
    if exponent > limit_bits {
        return Err(ValuationBudget { exponent, limit: limit_bits });
    }
    let mut buf = Vec::new();
    let mut vals = vec![BitSet::with_capacity(n); k];
    let all = BitSet::full(n);
    for code in 0u64..(1u64 << exponent) {
        for (i, v) in vals.iter_mut().enumerate() {
            *v = BitSet::from_word((code >> (i * n)) & ((1u64 << n) - 1));
        }
        prog.run(s, &vals, &mut buf);
        let ext = prog.root_extension(0, &buf);
        if ext != &all {
            let world = all.difference(ext).first().expect("a failing world");
            let valuation = prog.vars().iter().cloned().zip(vals.iter().cloned()).collect();
            return Ok(Validity::Refuted { valuation, world });
        }
    }
    Ok(Validity::Valid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn names(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn skeleton_validation_names_the_clause() {
        let ws = names(&["x", "y", "z"]);
        let r = |pairs: &[(&str, &str)]| {
            let pairs: Vec<_> = pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
            relation_from_pairs(&ws, &pairs)
        };
        assert!(Skeleton::new(ws.clone(), r(&[("x", "y"), ("y", "z"), ("x", "z")]).unwrap()).is_ok());
        assert_eq!(
            Skeleton::new(ws.clone(), r(&[("x", "y"), ("y", "z")]).unwrap()),
            Err(FrameError::NotTransitive { x: "x".into(), y: "y".into(), z: "z".into() })
        );
        assert_eq!(
            Skeleton::new(ws.clone(), r(&[("x", "y"), ("y", "x"), ("x", "x"), ("y", "y")]).unwrap()),
            Err(FrameError::Cycle("x".into()))
        );
        assert_eq!(r(&[("x", "q")]), Err(FrameError::UnknownWorld("q".into())));
    }

    #[test]
    fn world_order_is_natural() {
        let order = canonical_world_order(names(&["w10", "y1", "w2", "x", "y0"])).unwrap();
        assert_eq!(order, names(&["w2", "w10", "x", "y0", "y1"]));
        assert_eq!(canonical_world_order(names(&["a", "a"])), Err(FrameError::DuplicateWorld("a".into())));
    }

    /// Three worlds `0 R 1`, `0 R 2`, `1 R 2`, with `1 S_0 2` only.
    struct Tiny {
        r: Vec<BitSet>,
    }

    impl Structure for Tiny {
        fn world_count(&self) -> usize {
            3
        }
        fn successors(&self, x: usize) -> &BitSet {
            &self.r[x]
        }
        fn interprets(&self, x: usize, y: usize, target: &BitSet) -> bool {
            x == 0 && y == 1 && target.contains(2)
        }
    }

    fn tiny() -> Tiny {
        Tiny { r: vec![[1, 2].into_iter().collect(), BitSet::singleton(2), BitSet::default()] }
    }

    #[test]
    fn evaluates_box_and_rhd() {
        let s = tiny();
        let val: Valuation = [("p".to_string(), BitSet::singleton(1)), ("q".to_string(), BitSet::singleton(2))].into();
        let ext = |f: &str| extension(&s, &val, &parse(f).unwrap()).iter().collect::<Vec<_>>();
        assert_eq!(ext("[]q"), vec![1, 2]);
        assert_eq!(ext("p |> q"), vec![0, 1, 2]);
        assert_eq!(ext("q |> p"), vec![2]);
        assert_eq!(ext("<>p"), vec![0]);
        assert_eq!(ext("r | ~r"), vec![0, 1, 2]);
    }

    #[test]
    fn validity_reports_the_first_counterexample() {
        let s = tiny();
        match check_validity(&s, &parse("p |> p").unwrap(), 20).unwrap() {
            Validity::Refuted { valuation, world } => {
                assert_eq!(world, 0);
                assert_eq!(valuation["p"], BitSet::singleton(1));
            }
            Validity::Valid => panic!("p |> p is not valid here"),
        }
        assert!(check_validity(&s, &parse("(p |> p) | ~(p |> p)").unwrap(), 20).unwrap().is_valid());
        assert!(check_validity(&s, &parse("a & b & c & d & e & f & g").unwrap(), 20).is_err());
    }
}
