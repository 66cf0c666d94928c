//! Finite canonical models over `K_L`, each audited after construction.
//!
//! Four constructions cover the registered logics:
//!
//! * veltman-tagged: worlds `⟨Γ, B⟩` for `Γ ∈ K_L` and `B ∈ Φ▷`, `R` is `≺`;
//!   Veltman logics without both `J2+` and `J5`;
//! * veltman-sequenced: worlds `⟨Γ, τ⟩` for sequences `τ` over `Φ▷` with
//!   `rank(Γ) + |τ| ≤ rank(Γ₀)`, `R` is `≺` together with proper
//!   extension of the sequence; `IL⁻(J2+, J5)` and `IL`;
//! * gen-tagged: as veltman-tagged with generalized `S`; generalized
//!   logics without both `J2` and `J5`;
//! * gen-sequenced: as veltman-sequenced with the maximal rank as bound
//!   and generalized `S`; `IL⁻(J2, J5)` and `IL⁻(J2, J4+, J5)`.
//!
//! Writing `x = ⟨Γ, ·⟩`, `y = ⟨Δ, ·⟩`, `z = ⟨Θ, ·⟩`, `C` for the operand
//! `y` carries (its tag in the tagged constructions, the entry of its
//! sequence just past `x`'s in the sequenced ones) and `N_C` for the worlds
//! whose set contains `∼C`, `y S_x …` requires `x R y` and the logic's
//! clause:
//!
//! * veltman-tagged: `y S_x z` iff, when `Γ ≺_C Δ` (and `□∼C ∈ Δ` with
//!   `J5`), `z ∈ N_C`; with `J4+` also `x R z`; with `J2+` `x R z` and, when
//!   `Γ ≺_C Δ`, `z` is tagged `C`, `Γ ≺_C Θ` and `z ∈ N_C`;
//! * veltman-sequenced: `y S_x z` iff `x R z` and, when `Γ ≺*_C Δ` and
//!   `□∼C ∈ Δ`, `z`'s sequence extends `τ·C`, `Γ ≺*_C Θ` and
//!   `∼C, □∼C ∈ Θ`;
//! * gen-tagged: `y S_x V` iff `V` meets `R[x]` and, when the antecedent holds,
//!   `V` meets `N_C` (`J4` logics, antecedent `Γ ≺_C Δ`, with `□∼C ∈ Δ`
//!   under `J5`), or `V` meets `N_C` (within `R[x]` under `J4+`) and
//!   contains a `z` tagged `C` with `Γ ≺_C Θ` (`J2` logics);
//! * gen-sequenced: `y S_x V` iff `V` meets `R[x]` and, when `Γ ≺*_C Δ` and
//!   `□∼C ∈ Δ`, `V` contains a `z` extending `τ·C` with `Γ ≺*_C Θ`,
//!   `□∼C ∈ Θ`, and a member of `N_C` (extending `τ·C` and in `R[x]`
//!   under `J4+`).
//!
//! Generalized frames are stored by their minimal generators.

use super::mcs::{Kl, Row};
use super::{Countermodel, DecideError};
use crate::bitset::BitSet;
use crate::correspondence::FrameConditions;
use crate::genveltman::{GenFrame, GenModel};
use crate::kernel::{FrameClass, Logic};
use crate::semantics::{Program, Valuation};
use crate::syntax::Formula;
use crate::veltman::{VeltmanFrame, VeltmanModel};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;

/// Most worlds a canonical model may have.
pub const MAX_CANONICAL_WORLDS: usize = 768;

/// Most generators, summed over all `(x, y)`, of a generalized canonical
/// model.
pub const MAX_CANONICAL_GENERATORS: usize = 1 << 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    VeltmanTagged,
    VeltmanSequenced,
    GenTagged,
    GenSequenced,
}

impl Construction {
    /// The construction that applies to `logic`.
    pub fn for_logic(logic: &Logic) -> Construction {
        let row = Row::of(logic);
        match (logic.complete_class(), row.starred()) {
            (FrameClass::Veltman, false) => Construction::VeltmanTagged,
            (FrameClass::Veltman, true) => Construction::VeltmanSequenced,
            (FrameClass::Generalized, false) => Construction::GenTagged,
            (FrameClass::Generalized, true) => Construction::GenSequenced,
        }
    }

    /// Whether worlds carry sequences rather than single operands.
    pub fn uses_sequences(self) -> bool {
        matches!(self, Construction::VeltmanSequenced | Construction::GenSequenced)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::VeltmanTagged => "veltman-tagged",
            Construction::VeltmanSequenced => "veltman-sequenced",
            Construction::GenTagged => "gen-tagged",
            Construction::GenSequenced => "gen-sequenced",
        })
    }
}

/// A world of a canonical model: a position in `K_L` and a tag, an operand
/// index or a sequence of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalWorld {
    pub set: usize,
    pub tag: Vec<usize>,
}

/// An audited canonical model with the world where it was rooted.
#[derive(Debug, Clone)]
pub struct CanonicalModel {
    pub construction: Construction,
    pub model: Countermodel,
    pub root: usize,
    pub worlds: Vec<CanonicalWorld>,
}

impl CanonicalModel {
    /// `⟨Γ3, p⟩`, `⟨Γ0, ⟨⊥, p⟩⟩`, `⟨Γ1, ε⟩`.
    pub fn describe(&self, kl: &Kl, w: usize) -> String {
        let ops = kl.index().ctx().rhd_operands();
        let CanonicalWorld { set, tag } = &self.worlds[w];
        let names: Vec<String> = tag.iter().map(|&c| ops[c].to_string()).collect();
        let tag = match (self.construction.uses_sequences(), names.is_empty()) {
            (false, _) => names.join(""),
            (true, true) => "ε".into(),
            (true, false) => format!("⟨{}⟩", names.join(", ")),
        };
        format!("⟨Γ{set}, {tag}⟩")
    }

    /// The model's JSON with each world's set and tag.
    pub fn to_json(&self, kl: &Kl) -> serde_json::Value {
        let sk = self.model.skeleton();
        let worlds: serde_json::Map<String, serde_json::Value> =
            (0..self.worlds.len()).map(|w| (sk.name(w).to_string(), self.describe(kl, w).into())).collect();
        serde_json::json!({
            "construction": self.construction.to_string(),
            "root": sk.name(self.root),
            "model": self.model.to_json(),
            "worlds": worlds,
        })
    }
}

fn unsupported(kl: &Kl, wanted: Construction) -> Result<(), DecideError> {
    let actual = Construction::for_logic(kl.logic());
    if actual == wanted {
        Ok(())
    } else {
        Err(DecideError::Unsupported { logic: kl.logic().to_string(), construction: wanted.to_string() })
    }
}

/// The least set (by member bitmask) containing `∼a`.
fn refuting_set(kl: &Kl, a: &Formula) -> Result<usize, DecideError> {
    let ix = kl.index();
    let i = ix.ctx().index_of(a).ok_or_else(|| DecideError::NotInClosure(a.to_string()))?;
    let na = ix.neg(i);
    kl.sets().iter().position(|s| s.members().contains(na)).ok_or_else(|| DecideError::Proved(a.to_string()))
}

/// veltman-tagged rooted at the least set containing `∼a`, audited.
pub fn canonical_veltman_tagged(kl: &Kl, a: &Formula) -> Result<CanonicalModel, DecideError> {
    unsupported(kl, Construction::VeltmanTagged)?;
    rooted(kl, Construction::VeltmanTagged, refuting_set(kl, a)?)
}

/// veltman-sequenced rooted at the least set containing `∼a`, audited.
pub fn canonical_veltman_sequenced(kl: &Kl, a: &Formula) -> Result<CanonicalModel, DecideError> {
    unsupported(kl, Construction::VeltmanSequenced)?;
    rooted(kl, Construction::VeltmanSequenced, refuting_set(kl, a)?)
}

/// gen-tagged rooted at the least set containing `∼a`, audited.
pub fn canonical_gen_tagged(kl: &Kl, a: &Formula) -> Result<CanonicalModel, DecideError> {
    unsupported(kl, Construction::GenTagged)?;
    rooted(kl, Construction::GenTagged, refuting_set(kl, a)?)
}

/// gen-sequenced rooted at the least set containing `∼a`, audited.
pub fn canonical_gen_sequenced(kl: &Kl, a: &Formula) -> Result<CanonicalModel, DecideError> {
    unsupported(kl, Construction::GenSequenced)?;
    rooted(kl, Construction::GenSequenced, refuting_set(kl, a)?)
}

/// Whichever construction applies to the logic, rooted at the least set
/// containing `∼a`, audited.
pub fn canonical_model(kl: &Kl, a: &Formula) -> Result<CanonicalModel, DecideError> {
    rooted(kl, Construction::for_logic(kl.logic()), refuting_set(kl, a)?)
}

/// Builds a model containing every set of `kl` and audits it; when it
/// passes, every set is satisfied in a frame for the logic and so is
/// consistent.
pub(crate) fn certify(kl: &Kl) -> Result<(), DecideError> {
    if kl.is_empty() {
        return Err(DecideError::Audit("no candidate set survived".into()));
    }
    let c = Construction::for_logic(kl.logic());
    let root = if c == Construction::VeltmanSequenced { (0..kl.len()).max_by_key(|&i| kl.rank(i)).unwrap() } else { 0 };
    rooted(kl, c, root).map(|_| ())
}

fn rooted(kl: &Kl, c: Construction, root_set: usize) -> Result<CanonicalModel, DecideError> {
    let m = Builder::new(kl, c, root_set)?.build()?;
    audit(kl, &m)?;
    Ok(m)
}

/// Checks that the frame meets the logic's conditions and the truth
/// lemma: every formula of the adequate set holds exactly at the worlds
/// whose set contains it.
pub fn audit(kl: &Kl, m: &CanonicalModel) -> Result<(), DecideError> {
    let logic = kl.logic();
    let violation = |p| match &m.model {
        Countermodel::Veltman(v) => v.frame.violation(p),
        Countermodel::Generalized(g) => g.frame.violation(p),
    };
    for p in logic.principles() {
        if let Some(v) = violation(p) {
            return Err(DecideError::Audit(format!("{} frame fails the {p} condition: {v}", m.construction)));
        }
    }
    let ctx = kl.index().ctx();
    let program = Program::new(ctx.formulas());
    let val = valuation(kl, m);
    let ext = match &m.model {
        Countermodel::Veltman(v) => program.extensions(&v.frame, &val),
        Countermodel::Generalized(g) => program.extensions(&g.frame, &val),
    };
    for (i, e) in ext.iter().enumerate() {
        for (w, world) in m.worlds.iter().enumerate() {
            let member = kl.sets()[world.set].members().contains(i);
            if e.contains(w) != member {
                return Err(DecideError::Audit(format!(
                    "truth lemma fails for {} at {}: {} but {}",
                    ctx.get(i),
                    m.describe(kl, w),
                    if member { "member" } else { "not a member" },
                    if e.contains(w) { "true" } else { "false" },
                )));
            }
        }
    }
    Ok(())
}

fn valuation(kl: &Kl, m: &CanonicalModel) -> Valuation {
    let ctx = kl.index().ctx();
    ctx.formulas()
        .iter()
        .enumerate()
        .filter_map(|(i, f)| match f {
            Formula::Var(v) => {
                let ws = (0..m.worlds.len()).filter(|&w| kl.sets()[m.worlds[w].set].members().contains(i)).collect();
                Some((v.clone(), ws))
            }
            _ => None,
        })
        .collect()
}

fn too_many_worlds(c: Construction) -> DecideError {
    DecideError::Infeasible {
        reason: format!("the {c} model has more than {MAX_CANONICAL_WORLDS} worlds"),
        bound: None,
    }
}

struct Builder<'a> {
    kl: &'a Kl,
    c: Construction,
    row: Row,
    worlds: Vec<CanonicalWorld>,
    root: usize,
    /// `crit[c][i]`: positions `j` with `Γᵢ ≺_C Γⱼ` (`≺*_C` for sequence
    /// constructions).
    crit: Vec<Vec<BitSet>>,
    /// Worlds whose set contains `∼C`, and whose set contains `□∼C`.
    neg_c: Vec<BitSet>,
    box_neg_c: Vec<BitSet>,
    r: Vec<BitSet>,
}

impl<'a> Builder<'a> {
    fn new(kl: &'a Kl, c: Construction, root_set: usize) -> Result<Builder<'a>, DecideError> {
        let ix = kl.index();
        let k = ix.operand_count();
        let n = kl.len();
        let bot = ix.operand(&Formula::Bot).expect("⊥ is always an operand");
        let mut worlds = Vec::new();
        let root;
        if c.uses_sequences() {
            let bound = if c == Construction::VeltmanSequenced { kl.rank(root_set) } else { kl.max_rank() };
            let mut budget_ok = true;
            for set in 0..n {
                let room = bound.checked_sub(kl.rank(set));
                let Some(room) = room else { continue };
                let mut stack = vec![Vec::new()];
                while let Some(tag) = stack.pop() {
                    if tag.len() < room {
                        for op in (0..k).rev() {
                            let mut t = tag.clone();
                            t.push(op);
                            stack.push(t);
                        }
                    }
                    worlds.push(CanonicalWorld { set, tag });
                    if worlds.len() > MAX_CANONICAL_WORLDS {
                        budget_ok = false;
                        break;
                    }
                }
                if !budget_ok {
                    break;
                }
            }
            if !budget_ok {
                return Err(too_many_worlds(c));
            }
            root = worlds.iter().position(|w| w.set == root_set && w.tag.is_empty()).unwrap();
        } else {
            if n * k > MAX_CANONICAL_WORLDS {
                return Err(too_many_worlds(c));
            }
            worlds = (0..n).flat_map(|set| (0..k).map(move |op| CanonicalWorld { set, tag: vec![op] })).collect();
            root = root_set * k + bot;
        }
        let star = c.uses_sequences();
        let sets = kl.sets();
        let crit = (0..k)
            .map(|op| {
                (0..n)
                    .map(|i| {
                        kl.successors(i)
                            .iter()
                            .filter(|&j| ix.requirement(sets[i].members(), op, star).is_subset(sets[j].members()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let holding =
            |m: usize| -> BitSet { (0..worlds.len()).filter(|&w| sets[worlds[w].set].members().contains(m)).collect() };
        let neg_c = (0..k).map(|op| holding(ix.neg_op(op))).collect();
        let box_neg_c = (0..k).map(|op| holding(ix.box_neg_op(op))).collect();
        let r = worlds
            .iter()
            .map(|x| {
                (0..worlds.len())
                    .filter(|&y| {
                        let w = &worlds[y];
                        kl.successors(x.set).contains(w.set)
                            && (!star || (w.tag.len() > x.tag.len() && w.tag.starts_with(&x.tag)))
                    })
                    .collect()
            })
            .collect();
        Ok(Builder { kl, c, row: Row::of(kl.logic()), worlds, root, crit, neg_c, box_neg_c, r })
    }

    /// The operand `y` carries relative to `x`.
    fn operand(&self, x: usize, y: usize) -> usize {
        let (x, y) = (&self.worlds[x], &self.worlds[y]);
        if self.c.uses_sequences() {
            y.tag[x.tag.len()]
        } else {
            y.tag[0]
        }
    }

    /// Whether the logic's clause is triggered for `x`, `y`.
    fn antecedent(&self, x: usize, y: usize, op: usize) -> bool {
        let (xs, ys) = (self.worlds[x].set, self.worlds[y].set);
        self.crit[op][xs].contains(ys) && (!(self.row.j5 || self.c.uses_sequences()) || self.box_neg_c[op].contains(y))
    }

    fn set_filter(&self, f: impl Fn(usize) -> bool) -> BitSet {
        (0..self.worlds.len()).filter(|&z| f(z)).collect()
    }

    /// Worlds extending `x`'s sequence by `op` whose sets are critical
    /// successors of `x`'s.
    fn extending(&self, x: usize, op: usize) -> impl Fn(usize) -> bool + '_ {
        let xw = &self.worlds[x];
        move |z| {
            let zw = &self.worlds[z];
            zw.tag.len() > xw.tag.len() && zw.tag.starts_with(&xw.tag) && zw.tag[xw.tag.len()] == op
        }
    }

    fn build(self) -> Result<CanonicalModel, DecideError> {
        let model = match self.c {
            Construction::VeltmanTagged | Construction::VeltmanSequenced => Countermodel::Veltman(self.veltman()),
            Construction::GenTagged | Construction::GenSequenced => Countermodel::Generalized(self.generalized()?),
        };
        Ok(CanonicalModel { construction: self.c, model, root: self.root, worlds: self.worlds })
    }

    fn valuation(&self) -> Valuation {
        let ctx = self.kl.index().ctx();
        ctx.formulas()
            .iter()
            .enumerate()
            .filter_map(|(i, f)| match f {
                Formula::Var(v) => {
                    Some((v.clone(), self.set_filter(|w| self.kl.sets()[self.worlds[w].set].members().contains(i))))
                }
                _ => None,
            })
            .collect()
    }

    /// `S_x[y]` for the Veltman constructions.
    fn targets(&self, x: usize, y: usize) -> BitSet {
        let op = self.operand(x, y);
        let rx = &self.r[x];
        let ante = self.antecedent(x, y, op);
        let xs = self.worlds[x].set;
        match self.c {
            Construction::VeltmanTagged => {
                let base = if self.row.j4plus { rx.clone() } else { BitSet::full(self.worlds.len()) };
                if !ante {
                    base
                } else if self.row.j2plus {
                    self.set_filter(|z| {
                        base.contains(z)
                            && self.worlds[z].tag[0] == op
                            && self.crit[op][xs].contains(self.worlds[z].set)
                            && self.neg_c[op].contains(z)
                    })
                } else {
                    base.intersection(&self.neg_c[op])
                }
            }
            _ => {
                if !ante {
                    rx.clone()
                } else {
                    let ext = self.extending(x, op);
                    self.set_filter(|z| {
                        ext(z)
                            && self.crit[op][xs].contains(self.worlds[z].set)
                            && self.neg_c[op].contains(z)
                            && self.box_neg_c[op].contains(z)
                    })
                }
            }
        }
    }

    fn veltman(&self) -> VeltmanModel {
        let n = self.worlds.len();
        // In veltman-tagged, S_x depends on x only through its set.
        let mut memo: HashMap<(usize, usize), Vec<BitSet>> = HashMap::new();
        let s: Vec<Vec<BitSet>> = (0..n)
            .map(|x| {
                let key = (self.worlds[x].set, if self.c.uses_sequences() { x } else { 0 });
                memo.entry(key)
                    .or_insert_with(|| {
                        (0..n)
                            .map(|y| if self.r[x].contains(y) { self.targets(x, y) } else { BitSet::default() })
                            .collect()
                    })
                    .clone()
            })
            .collect();
        VeltmanModel { frame: VeltmanFrame::from_parts(self.r.clone(), s), valuation: self.valuation() }
    }

    /// The minimal sets meeting both `a` and `b`.
    fn meeting_both(a: &BitSet, b: &BitSet) -> Vec<BitSet> {
        let both = a.intersection(b);
        let mut out: Vec<BitSet> = both.iter().map(BitSet::singleton).collect();
        for p in a.difference(b).iter() {
            for q in b.difference(a).iter() {
                out.push([p, q].into_iter().collect());
            }
        }
        out.sort();
        out
    }

    fn count_meeting_both(a: &BitSet, b: &BitSet) -> usize {
        a.intersection(b).len() + a.difference(b).len() * b.difference(a).len()
    }

    /// `{V : y S_x V}` for the generalized constructions is the set of
    /// supersets of the sets meeting both returned sides.
    fn sides(&self, x: usize, y: usize) -> (BitSet, BitSet) {
        let op = self.operand(x, y);
        let rx = &self.r[x];
        let xs = self.worlds[x].set;
        if !self.antecedent(x, y, op) {
            return (rx.clone(), rx.clone());
        }
        match self.c {
            Construction::GenTagged if !self.row.j2 => (rx.clone(), self.neg_c[op].clone()),
            Construction::GenTagged => {
                let tagged =
                    self.set_filter(|z| self.worlds[z].tag[0] == op && self.crit[op][xs].contains(self.worlds[z].set));
                let neg = if self.row.j4plus { rx.intersection(&self.neg_c[op]) } else { self.neg_c[op].clone() };
                (tagged, neg)
            }
            _ => {
                let ext = self.extending(x, op);
                let tagged = self.set_filter(|z| {
                    ext(z) && self.crit[op][xs].contains(self.worlds[z].set) && self.box_neg_c[op].contains(z)
                });
                let neg = if self.row.j4plus {
                    self.set_filter(|z| ext(z) && rx.contains(z) && self.neg_c[op].contains(z))
                } else {
                    self.neg_c[op].clone()
                };
                (tagged, neg)
            }
        }
    }

    fn generalized(&self) -> Result<GenModel, DecideError> {
        let n = self.worlds.len();
        let sides: Vec<Vec<Option<(BitSet, BitSet)>>> = (0..n)
            .into_par_iter()
            .map(|x| (0..n).map(|y| self.r[x].contains(y).then(|| self.sides(x, y))).collect())
            .collect();
        let total: usize = sides.iter().flatten().flatten().map(|(a, b)| Self::count_meeting_both(a, b)).sum();
        if total > MAX_CANONICAL_GENERATORS {
            return Err(DecideError::Infeasible {
                reason: format!("the {} model has {total} generators, more than {MAX_CANONICAL_GENERATORS}", self.c),
                bound: None,
            });
        }
        let rows: Vec<Vec<Vec<BitSet>>> = sides
            .into_par_iter()
            .map(|row| row.into_iter().map(|s| s.map_or_else(Vec::new, |(a, b)| Self::meeting_both(&a, &b))).collect())
            .collect();
        Ok(GenModel { frame: GenFrame::from_parts(self.r.clone(), rows), valuation: self.valuation() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::mcs::{enumerate_kl, ExactOracle};
    use crate::syntax::{adequate_closure, parse};

    fn kl(logic: &str, seed: &str) -> Kl {
        let ctx = adequate_closure(&[parse(seed).unwrap()]);
        enumerate_kl(&Logic::by_name(logic).unwrap(), &ctx, &ExactOracle::default()).unwrap()
    }

    #[test]
    fn constructions_cover_the_registry() {
        let count = |c| Logic::registry().iter().filter(|l| Construction::for_logic(l) == c).count();
        assert_eq!(count(Construction::VeltmanTagged), 10);
        assert_eq!(count(Construction::VeltmanSequenced), 2);
        assert_eq!(count(Construction::GenTagged), 6);
        assert_eq!(count(Construction::GenSequenced), 2);
    }

    #[test]
    fn tagged_veltman_refutes_p_interprets_p() {
        let k = kl("IL-", "p |> p");
        let a = parse("p |> p").unwrap();
        let m = canonical_veltman_tagged(&k, &a).unwrap();
        assert!(!m.model.eval(m.root, &a));
        assert!(m.model.is_frame_for(k.logic()));
    }

    #[test]
    fn theorems_have_no_root() {
        let k = kl("IL-(J1)", "p |> p");
        let a = parse("p |> p").unwrap();
        assert!(matches!(canonical_veltman_tagged(&k, &a), Err(DecideError::Proved(_))));
    }

    #[test]
    fn construction_must_fit_the_logic() {
        let k = kl("IL-", "p");
        let a = parse("p").unwrap();
        assert!(matches!(canonical_veltman_sequenced(&k, &a), Err(DecideError::Unsupported { .. })));
        assert!(canonical_veltman_tagged(&k, &a).is_ok());
    }

    #[test]
    fn sequence_models_root_at_the_empty_sequence() {
        let k = kl("IL", "[]p");
        let a = parse("[]p").unwrap();
        let m = canonical_veltman_sequenced(&k, &a).unwrap();
        assert!(m.worlds[m.root].tag.is_empty());
        assert!(!m.model.eval(m.root, &a));
    }

    #[test]
    fn generalized_constructions_pass_audit() {
        let a = parse("[]p").unwrap();
        let m = canonical_gen_tagged(&kl("IL-(J4)", "[]p"), &a).unwrap();
        assert!(!m.model.eval(m.root, &a));
        let m = canonical_gen_sequenced(&kl("IL-(J2,J5)", "[]p"), &a).unwrap();
        assert!(!m.model.eval(m.root, &a));
    }

    #[test]
    fn j5_proves_diamond_p_interprets_p() {
        let k = kl("IL-(J5)", "<>p |> p");
        assert_eq!(k.len(), 50);
        let a = parse("<>p |> p").unwrap();
        assert!(matches!(canonical_veltman_tagged(&k, &a), Err(DecideError::Proved(_))));
    }
}
