//! Generalized Veltman frames (ILS-frames) and their models.
//!
//! Here `S_x` relates worlds to nonempty sets of worlds and is closed
//! upwards: `y S_x V` and `V ⊆ U` give `y S_x U`. A frame stores, for each
//! pair `(x, y)`, only the minimal sets (the *generators*); `y S_x V` holds
//! iff some generator is contained in `V`.

use crate::bitset::BitSet;
use crate::semantics::{
    self, canonical_world_order, check_validity, relation_from_pairs, valuation_from_names, valuation_to_names,
    FrameError, Skeleton, Structure, Validity, Valuation, ValuationBudget,
};
use crate::syntax::Formula;
use crate::veltman::{LoadError, VeltmanFrame, VeltmanModel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenFrame {
    skeleton: Skeleton,
    /// `gens[x][y]`: the generators of `{V : y S_x V}`, an antichain in
    /// increasing order.
    gens: Vec<Vec<Vec<BitSet>>>,
}

/// Removes duplicates and non-minimal sets, leaving a sorted antichain.
pub fn reduce_to_antichain(sets: &mut Vec<BitSet>) {
    sets.sort();
    sets.dedup();
    // A proper subset is numerically smaller, so it always comes earlier.
    let mut kept: Vec<BitSet> = Vec::with_capacity(sets.len());
    for s in sets.drain(..) {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    *sets = kept;
}

impl GenFrame {
    /// Checks the frame clauses: `R` transitive and acyclic, generators only
    /// for `x R y`, no empty generator, and (unless `reduce` is set, in
    /// which case they are reduced instead) generators forming an antichain.
    pub fn new(skeleton: Skeleton, mut gens: Vec<Vec<Vec<BitSet>>>, reduce: bool) -> Result<GenFrame, FrameError> {
        let n = skeleton.len();
        assert!(gens.len() == n && gens.iter().all(|row| row.len() == n), "S needs an n × n table");
        for x in 0..n {
            for y in 0..n {
                let g = &mut gens[x][y];
                if g.is_empty() {
                    continue;
                }
                let names = || (skeleton.name(x).to_string(), skeleton.name(y).to_string());
                if !skeleton.relates(x, y) {
                    let (x, y) = names();
                    return Err(FrameError::SOutsideR { x, y });
                }
                if let Some(z) = g.iter().flat_map(|v| v.iter()).find(|&z| z >= n) {
                    return Err(FrameError::UnknownWorld(format!("#{z}")));
                }
                if g.iter().any(|v| v.is_empty()) {
                    let (x, y) = names();
                    return Err(FrameError::EmptyGenerator { x, y });
                }
                let before = g.len();
                reduce_to_antichain(g);
                if g.len() != before && !reduce {
                    let (x, y) = names();
                    return Err(FrameError::NotAntichain { x, y });
                }
            }
        }
        Ok(GenFrame { skeleton, gens })
    }

    /// Builds a frame from named data, `s` listing `(x, y, generator)`;
    /// world order is canonicalized and generators are reduced.
    pub fn from_names<W: AsRef<str>>(worlds: &[W], r: &[(W, W)], s: &[(W, W, &[W])]) -> Result<GenFrame, FrameError> {
        let own = |w: &W| w.as_ref().to_string();
        let names = canonical_world_order(worlds.iter().map(own).collect())?;
        let r_pairs: Vec<_> = r.iter().map(|(a, b)| (own(a), own(b))).collect();
        let skeleton = Skeleton::new(names.clone(), relation_from_pairs(&names, &r_pairs)?)?;
        let n = skeleton.len();
        let mut gens = vec![vec![Vec::new(); n]; n];
        for (x, y, v) in s {
            let v = v.iter().map(|z| skeleton.index_of(z.as_ref())).collect::<Result<BitSet, _>>()?;
            gens[skeleton.index_of(x.as_ref())?][skeleton.index_of(y.as_ref())?].push(v);
        }
        GenFrame::new(skeleton, gens, true)
    }

    /// A frame on worlds `w0, …` from a strict order and antichain
    /// generators.
    pub(crate) fn from_parts(r: Vec<BitSet>, gens: Vec<Vec<Vec<BitSet>>>) -> GenFrame {
        GenFrame { skeleton: Skeleton::from_order(r), gens }
    }

    /// The image of a Veltman frame: `y S'_x V` iff `y S_x z` for some
    /// `z ∈ V`, so the generators are the singletons `{z}`.
    pub fn from_veltman(frame: &VeltmanFrame) -> GenFrame {
        let n = frame.len();
        let gens = (0..n)
            .map(|x| (0..n).map(|y| frame.s_successors(x, y).iter().map(BitSet::singleton).collect()).collect())
            .collect();
        GenFrame { skeleton: frame.skeleton().clone(), gens }
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn len(&self) -> usize {
        self.skeleton.len()
    }

    pub fn is_empty(&self) -> bool {
        self.skeleton.is_empty()
    }

    pub fn generators(&self, x: usize, y: usize) -> &[BitSet] {
        &self.gens[x][y]
    }

    /// `y S_x V`.
    pub fn relates_to_set(&self, x: usize, y: usize, v: &BitSet) -> bool {
        self.gens[x][y].iter().any(|g| g.is_subset(v))
    }

    pub fn validity(&self, f: &Formula, limit_bits: u32) -> Result<Validity, ValuationBudget> {
        check_validity(self, f, limit_bits)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GenFile::from_frame(self, None)).expect("serializable")
    }

    pub fn from_json(text: &str, reduce: bool) -> Result<GenFrame, LoadError> {
        Ok(GenModel::from_json(text, reduce)?.frame)
    }
}

impl Structure for GenFrame {
    fn world_count(&self) -> usize {
        self.len()
    }

    fn successors(&self, x: usize) -> &BitSet {
        self.skeleton.successors(x)
    }

    fn interprets(&self, x: usize, y: usize, target: &BitSet) -> bool {
        self.relates_to_set(x, y, target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenModel {
    pub frame: GenFrame,
    pub valuation: Valuation,
}

impl GenModel {
    pub fn new(frame: GenFrame, valuation: Valuation) -> Result<GenModel, FrameError> {
        let n = frame.len();
        for set in valuation.values() {
            if let Some(w) = set.iter().find(|&w| w >= n) {
                return Err(FrameError::UnknownWorld(format!("#{w}")));
            }
        }
        Ok(GenModel { frame, valuation })
    }

    /// Sets a variable's truth set by world names.
    pub fn with_var(mut self, var: &str, worlds: &[&str]) -> Result<GenModel, FrameError> {
        let set = worlds.iter().map(|w| self.frame.skeleton.index_of(w)).collect::<Result<_, _>>()?;
        self.valuation.insert(var.to_string(), set);
        Ok(self)
    }

    pub fn extension(&self, f: &Formula) -> BitSet {
        semantics::extension(&self.frame, &self.valuation, f)
    }

    pub fn eval(&self, world: usize, f: &Formula) -> bool {
        assert!(world < self.frame.len(), "unknown world {world}");
        self.extension(f).contains(world)
    }

    pub fn is_valid(&self, f: &Formula) -> bool {
        self.extension(f) == BitSet::full(self.frame.len())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GenFile::from_frame(&self.frame, Some(&self.valuation))).expect("serializable")
    }

    /// Reads `{"worlds":…,"R":…,"S":{"x":{"y":[["z",…],…]}},"val":…}`.
    /// With `reduce`, duplicate and non-minimal generators are dropped
    /// instead of rejected.
    pub fn from_json(text: &str, reduce: bool) -> Result<GenModel, LoadError> {
        let file: GenFile = serde_json::from_str(text)?;
        let names = canonical_world_order(file.worlds)?;
        let skeleton = Skeleton::new(names.clone(), relation_from_pairs(&names, &file.r)?)?;
        let n = skeleton.len();
        let mut gens = vec![vec![Vec::new(); n]; n];
        for (x, row) in &file.s {
            let x = skeleton.index_of(x)?;
            for (y, vs) in row {
                let y = skeleton.index_of(y)?;
                for v in vs {
                    gens[x][y].push(skeleton.set_of(v)?);
                }
            }
        }
        let frame = GenFrame::new(skeleton, gens, reduce)?;
        let valuation = valuation_from_names(&frame.skeleton, &file.val.unwrap_or_default())?;
        Ok(GenModel::new(frame, valuation)?)
    }
}

/// The generalized model with the same truth sets at every world.
pub fn embed_veltman(m: &VeltmanModel) -> GenModel {
    GenModel { frame: GenFrame::from_veltman(&m.frame), valuation: m.valuation.clone() }
}

#[derive(Serialize, Deserialize)]
struct GenFile {
    worlds: Vec<String>,
    #[serde(rename = "R", default)]
    r: Vec<(String, String)>,
    #[serde(rename = "S", default)]
    s: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    val: Option<BTreeMap<String, Vec<String>>>,
}

impl GenFile {
    fn from_frame(frame: &GenFrame, val: Option<&Valuation>) -> GenFile {
        let sk = &frame.skeleton;
        let name = |i: usize| sk.name(i).to_string();
        let mut s: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>> = BTreeMap::new();
        for (x, y) in sk.pairs() {
            let g = frame.generators(x, y);
            if !g.is_empty() {
                s.entry(name(x)).or_default().insert(name(y), g.iter().map(|v| sk.names_of(v)).collect());
            }
        }
        GenFile {
            worlds: sk.names().to_vec(),
            r: sk.pairs().map(|(x, y)| (name(x), name(y))).collect(),
            s,
            val: val.map(|v| valuation_to_names(sk, v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::DEFAULT_VALUATION_BITS;
    use crate::syntax::parse;

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    fn set(items: &[usize]) -> BitSet {
        items.iter().copied().collect()
    }

    /// Four worlds; `x` sees the rest; `y0 ↦ {y1,y2}`, `y1 ↦ {y2}`,
    /// `y2 ↦ {y0,y1,y2}`.
    fn first_frame() -> GenFrame {
        let (x, y0, y1, y2) = ("x", "y0", "y1", "y2");
        GenFrame::from_names(
            &[x, y0, y1, y2],
            &[(x, y0), (x, y1), (x, y2)],
            &[(x, y0, &[y1, y2]), (x, y1, &[y2]), (x, y2, &[y0, y1, y2])],
        )
        .unwrap()
    }

    /// Three worlds; `x` sees `y0`, `y1`; `y0 ↦ {y0} | {y1,y2}`,
    /// `y1 ↦ {y1}`.
    fn second_frame() -> GenFrame {
        let (x, y0, y1, y2) = ("x", "y0", "y1", "y2");
        GenFrame::from_names(
            &[x, y0, y1, y2],
            &[(x, y0), (x, y1)],
            &[(x, y0, &[y0]), (x, y0, &[y1, y2]), (x, y1, &[y1])],
        )
        .unwrap()
    }

    #[test]
    fn antichain_reduction() {
        let mut g = vec![set(&[1, 2]), set(&[2]), set(&[0, 1]), set(&[2]), set(&[0, 1, 3])];
        reduce_to_antichain(&mut g);
        assert_eq!(g, vec![set(&[0, 1]), set(&[2])]);
    }

    #[test]
    fn first_example_refutes_the_j2plus_instance() {
        let m = GenModel::new(first_frame(), Valuation::new())
            .unwrap()
            .with_var("p", &["y0"])
            .unwrap()
            .with_var("q", &["y1"])
            .unwrap()
            .with_var("r", &["y2"])
            .unwrap();
        assert!(m.eval(0, &f("p |> q | r")));
        assert!(m.eval(0, &f("q |> r")));
        assert!(!m.eval(0, &f("p |> r")));
        assert!(first_frame().validity(&f("<>p |> p"), DEFAULT_VALUATION_BITS).unwrap().is_valid());
    }

    #[test]
    fn second_example_refutes_the_j4plus_instance() {
        let m = GenModel::new(second_frame(), Valuation::new())
            .unwrap()
            .with_var("p", &["y0"])
            .unwrap()
            .with_var("q", &["y1", "y2"])
            .unwrap()
            .with_var("r", &["y1"])
            .unwrap();
        assert!(m.eval(0, &f("[](q -> r)")));
        assert!(m.eval(0, &f("p |> q")));
        assert!(!m.eval(0, &f("p |> r")));
        assert!(second_frame().validity(&f("p |> p"), DEFAULT_VALUATION_BITS).unwrap().is_valid());
    }

    #[test]
    fn dead_ends_force_every_rhd() {
        let m = GenModel::new(first_frame(), Valuation::new()).unwrap();
        assert!(m.eval(1, &f("p |> bot")));
        assert!(m.frame.validity(&f("top"), DEFAULT_VALUATION_BITS).unwrap().is_valid());
    }

    #[test]
    fn embedding_uses_singletons() {
        let v = VeltmanFrame::from_names(
            &["x", "y", "z1", "z2"],
            &[("x", "y"), ("x", "z1")],
            &[("x", "y", "z1"), ("x", "y", "z2")],
        )
        .unwrap();
        let g = GenFrame::from_veltman(&v);
        assert_eq!(g.generators(0, 1), &[set(&[2]), set(&[3])]);
        assert!(g.generators(0, 2).is_empty());
    }

    #[test]
    fn loader_rejects_or_reduces() {
        let text = r#"{"worlds":["x","y"],"R":[["x","y"]],"S":{"x":{"y":[["y"],["x","y"]]}}}"#;
        assert!(matches!(GenFrame::from_json(text, false), Err(LoadError::Frame(FrameError::NotAntichain { .. }))));
        let g = GenFrame::from_json(text, true).unwrap();
        assert_eq!(g.generators(0, 1), &[set(&[1])]);
        let empty = r#"{"worlds":["x","y"],"R":[["x","y"]],"S":{"x":{"y":[[]]}}}"#;
        assert!(matches!(GenFrame::from_json(empty, true), Err(LoadError::Frame(FrameError::EmptyGenerator { .. }))));
        let out = g.to_json().to_string();
        assert_eq!(out, r#"{"R":[["x","y"]],"S":{"x":{"y":[["y"]]}},"worlds":["x","y"]}"#);
        assert_eq!(GenFrame::from_json(&out, false).unwrap(), g);
    }
}
