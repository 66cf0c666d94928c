//! Finite Veltman prestructures (IL⁻-frames) and their models.
//!
//! A frame is `⟨W, R, {S_x}⟩` with `R` a strict partial order and each
//! `S_x ⊆ R[x] × W`. `A ▷ B` holds at `x` when every `R`-successor of `x`
//! satisfying `A` is `S_x`-related to some world satisfying `B`.

use crate::bitset::BitSet;
use crate::semantics::{
    self, canonical_world_order, check_validity, relation_from_pairs, valuation_from_names, valuation_to_names,
    FrameError, Skeleton, Structure, Validity, Valuation, ValuationBudget,
};
use crate::syntax::Formula;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VeltmanFrame {
    skeleton: Skeleton,
    /// `s[x][y]` is `{z : y S_x z}`.
    s: Vec<Vec<BitSet>>,
}

impl VeltmanFrame {
    /// Checks the frame clauses: `R` transitive and acyclic, and
    /// `y S_x z ⇒ x R y`.
    pub fn new(skeleton: Skeleton, s: Vec<Vec<BitSet>>) -> Result<VeltmanFrame, FrameError> {
        let n = skeleton.len();
        assert!(s.len() == n && s.iter().all(|row| row.len() == n), "S needs an n × n table");
        for x in 0..n {
            for y in 0..n {
                if s[x][y].is_empty() {
                    continue;
                }
                if let Some(z) = s[x][y].iter().find(|&z| z >= n) {
                    return Err(FrameError::UnknownWorld(format!("#{z}")));
                }
                if !skeleton.relates(x, y) {
                    return Err(FrameError::SOutsideR { x: skeleton.name(x).into(), y: skeleton.name(y).into() });
                }
            }
        }
        Ok(VeltmanFrame { skeleton, s })
    }

    /// Builds a frame from named relations; world order is canonicalized.
    pub fn from_names<W: AsRef<str>>(worlds: &[W], r: &[(W, W)], s: &[(W, W, W)]) -> Result<VeltmanFrame, FrameError> {
        let own = |w: &W| w.as_ref().to_string();
        let names = canonical_world_order(worlds.iter().map(own).collect())?;
        let r_pairs: Vec<_> = r.iter().map(|(a, b)| (own(a), own(b))).collect();
        let skeleton = Skeleton::new(names.clone(), relation_from_pairs(&names, &r_pairs)?)?;
        let n = skeleton.len();
        let mut table = vec![vec![BitSet::default(); n]; n];
        for (x, y, z) in s {
            let (x, y, z) =
                (skeleton.index_of(x.as_ref())?, skeleton.index_of(y.as_ref())?, skeleton.index_of(z.as_ref())?);
            table[x][y].insert(z);
        }
        VeltmanFrame::new(skeleton, table)
    }

    /// A frame on worlds `w0, …` from relations known to be well formed.
    pub(crate) fn from_parts(r: Vec<BitSet>, s: Vec<Vec<BitSet>>) -> VeltmanFrame {
        VeltmanFrame { skeleton: Skeleton::from_order(r), s }
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

    /// `{z : y S_x z}`.
    pub fn s_successors(&self, x: usize, y: usize) -> &BitSet {
        &self.s[x][y]
    }

    /// Every triple `(x, y, z)` with `y S_x z`, ordered by index.
    pub fn s_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |x| (0..n).flat_map(move |y| self.s[x][y].iter().map(move |z| (x, y, z))))
    }

    /// Validity under every valuation of the formula's variables.
    pub fn validity(&self, f: &Formula, limit_bits: u32) -> Result<Validity, ValuationBudget> {
        check_validity(self, f, limit_bits)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FrameFile::from_frame(self, None)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<VeltmanFrame, LoadError> {
        Ok(VeltmanModel::from_json(text)?.frame)
    }
}

impl Structure for VeltmanFrame {
    fn world_count(&self) -> usize {
        self.len()
    }

    fn successors(&self, x: usize) -> &BitSet {
        self.skeleton.successors(x)
    }

    fn interprets(&self, x: usize, y: usize, target: &BitSet) -> bool {
        self.s[x][y].intersects(target)
    }
}

/// A frame with a valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VeltmanModel {
    pub frame: VeltmanFrame,
    pub valuation: Valuation,
}

impl VeltmanModel {
    pub fn new(frame: VeltmanFrame, valuation: Valuation) -> Result<VeltmanModel, FrameError> {
        let n = frame.len();
        for set in valuation.values() {
            if let Some(w) = set.iter().find(|&w| w >= n) {
                return Err(FrameError::UnknownWorld(format!("#{w}")));
            }
        }
        Ok(VeltmanModel { frame, valuation })
    }

    /// Sets a variable's truth set by world names.
    pub fn with_var(mut self, var: &str, worlds: &[&str]) -> Result<VeltmanModel, FrameError> {
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

    /// Truth at every world.
    pub fn is_valid(&self, f: &Formula) -> bool {
        self.extension(f) == BitSet::full(self.frame.len())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FrameFile::from_frame(&self.frame, Some(&self.valuation))).expect("serializable")
    }

    /// Reads the JSON model format; a missing `val` gives the empty
    /// valuation.
    pub fn from_json(text: &str) -> Result<VeltmanModel, LoadError> {
        let file: FrameFile = serde_json::from_str(text)?;
        let names = canonical_world_order(file.worlds)?;
        let skeleton = Skeleton::new(names.clone(), relation_from_pairs(&names, &file.r)?)?;
        let n = skeleton.len();
        let mut s = vec![vec![BitSet::default(); n]; n];
        for (x, pairs) in &file.s {
            let x = skeleton.index_of(x)?;
            for (y, z) in pairs {
                s[x][skeleton.index_of(y)?].insert(skeleton.index_of(z)?);
            }
        }
        let frame = VeltmanFrame::new(skeleton, s)?;
        let valuation = valuation_from_names(&frame.skeleton, &file.val.unwrap_or_default())?;
        Ok(VeltmanModel::new(frame, valuation)?)
    }
}

/// Why a frame or model file could not be loaded.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// `{"worlds":[…],"R":[[x,y],…],"S":{"x":[[y,z],…]},"val":{"p":[…]}}`
#[derive(Serialize, Deserialize)]
struct FrameFile {
    worlds: Vec<String>,
    #[serde(rename = "R", default)]
    r: Vec<(String, String)>,
    #[serde(rename = "S", default)]
    s: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    val: Option<BTreeMap<String, Vec<String>>>,
}

impl FrameFile {
    fn from_frame(frame: &VeltmanFrame, val: Option<&Valuation>) -> FrameFile {
        let sk = &frame.skeleton;
        let name = |i: usize| sk.name(i).to_string();
        let mut s: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
        for (x, y, z) in frame.s_triples() {
            s.entry(name(x)).or_default().push((name(y), name(z)));
        }
        FrameFile {
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

    fn two(s: &[(&str, &str, &str)]) -> VeltmanFrame {
        VeltmanFrame::from_names(&["x", "y"], &[("x", "y")], s).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn frame_clauses() {
        assert!(VeltmanFrame::from_names(&["x", "y"], &[("x", "y")], &[("x", "y", "y")]).is_ok());
        assert_eq!(
            VeltmanFrame::from_names(&["x", "y"], &[("x", "y"), ("y", "x")], &[]),
            Err(FrameError::NotTransitive { x: "x".into(), y: "y".into(), z: "x".into() })
        );
        assert_eq!(
            VeltmanFrame::from_names(&["x", "y", "z"], &[("x", "y")], &[("x", "z", "y")]),
            Err(FrameError::SOutsideR { x: "x".into(), y: "z".into() })
        );
    }

    #[test]
    fn rhd_needs_an_s_successor() {
        let m = VeltmanModel::new(two(&[]), Valuation::new()).unwrap().with_var("p", &["y"]).unwrap();
        assert!(m.eval(0, &f("[]p")));
        assert!(!m.eval(0, &f("p |> p")));
        assert!(!m.is_valid(&f("p |> p")));
        assert!(m.is_valid(&f("top")));

        let m = VeltmanModel { frame: two(&[("x", "y", "y")]), valuation: m.valuation };
        assert!(m.eval(0, &f("p |> p")));
        assert!(m.is_valid(&f("p |> p")));
    }

    #[test]
    fn single_world_is_vacuous() {
        let m =
            VeltmanModel::new(VeltmanFrame::from_names::<&str>(&["w"], &[], &[]).unwrap(), Valuation::new()).unwrap();
        assert!(m.eval(0, &f("[]bot")));
        assert!(m.eval(0, &f("p |> bot")));
    }

    #[test]
    fn frame_validity() {
        let reflexive = two(&[("x", "y", "y")]);
        assert!(reflexive.validity(&f("p |> p"), DEFAULT_VALUATION_BITS).unwrap().is_valid());
        assert!(!two(&[]).validity(&f("p |> p"), DEFAULT_VALUATION_BITS).unwrap().is_valid());
        assert!(two(&[]).validity(&f("p -> p"), DEFAULT_VALUATION_BITS).unwrap().is_valid());
    }

    #[test]
    fn json_round_trip_canonicalizes_world_order() {
        let text = r#"{"worlds":["y","x"],"R":[["x","y"]],"S":{"x":[["y","y"]]},"val":{"p":["y"]}}"#;
        let m = VeltmanModel::from_json(text).unwrap();
        assert_eq!(m.frame.skeleton().names(), ["x", "y"]);
        assert!(m.eval(0, &f("p |> p")));
        let out = m.to_json().to_string();
        assert_eq!(out, r#"{"R":[["x","y"]],"S":{"x":[["y","y"]]},"val":{"p":["y"]},"worlds":["x","y"]}"#);
        assert_eq!(VeltmanModel::from_json(&out).unwrap(), m);
        assert!(matches!(
            VeltmanModel::from_json(r#"{"worlds":["x"],"R":[["x","x"]]}"#),
            Err(LoadError::Frame(FrameError::Cycle(_)))
        ));
    }
}
