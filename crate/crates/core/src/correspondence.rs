//! Frame conditions for J1, J2, J2+, J4, J4+ and J5 on both frame classes,
//! and audits comparing each condition with frame validity of the
//! principle's characteristic instance.
//!
//! On Veltman frames J4 and J4+ share a condition (`y S_x z ⇒ x R z`), as
//! do J2 and J2+ (that condition plus transitivity of every `S_x`).
//!
//! Conditions on generalized frames quantify over all sets `V` with
//! `y S_x V`. Every condition here is preserved when `V` shrinks to a
//! generator inside it, and choices `z ↦ U_z` only get harder when each
//! `U_z` is minimal, so checking generators (and, for J2+, the splits of a
//! generator into `V₀ ⊎ V₁`) is equivalent to checking all sets.

use crate::bitset::BitSet;
use crate::decide::posets::posets;
use crate::genveltman::GenFrame;
use crate::kernel::{FrameClass, Logic, Principle};
use crate::semantics::{check_validity, Skeleton, Structure, Validity, ValuationBudget};
use crate::veltman::VeltmanFrame;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// One of the ten conditions: a principle together with a frame class,
/// with the Veltman aliases folded together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConditionId {
    pub class: FrameClass,
    pub principle: Principle,
}

impl ConditionId {
    /// All ten conditions: `V_J1 V_J4 V_J2 V_J5` and
    /// `G_J1 G_J4 G_J4+ G_J2 G_J2+ G_J5`.
    pub const ALL: [ConditionId; 10] = {
        use FrameClass::{Generalized as G, Veltman as V};
        use Principle::*;
        macro_rules! c {
            ($class:expr, $p:expr) => {
                ConditionId { class: $class, principle: $p }
            };
        }
        [
            c!(V, J1),
            c!(V, J4),
            c!(V, J2),
            c!(V, J5),
            c!(G, J1),
            c!(G, J4),
            c!(G, J4Plus),
            c!(G, J2),
            c!(G, J2Plus),
            c!(G, J5),
        ]
    };

    /// The condition that a principle's validity corresponds to on the given
    /// class.
    pub fn new(class: FrameClass, principle: Principle) -> ConditionId {
        let principle = match (class, principle) {
            (FrameClass::Veltman, Principle::J4Plus) => Principle::J4,
            (FrameClass::Veltman, Principle::J2Plus) => Principle::J2,
            (_, p) => p,
        };
        ConditionId { class, principle }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.class {
            FrameClass::Veltman => "V",
            FrameClass::Generalized => "G",
        };
        write!(f, "{prefix}_{}", self.principle)
    }
}

/// Frames on which the principles' conditions can be checked.
pub trait FrameConditions: Structure {
    const CLASS: FrameClass;

    fn skeleton(&self) -> &Skeleton;

    /// A description of a counterexample to the condition for `p`, or
    /// `None` when it holds.
    fn violation(&self, p: Principle) -> Option<String>;

    fn satisfies(&self, p: Principle) -> bool {
        self.violation(p).is_none()
    }

    /// Whether the frame satisfies the condition of every principle of
    /// `logic`.
    fn is_frame_for(&self, logic: &Logic) -> bool {
        logic.principles().into_iter().all(|p| self.satisfies(p))
    }
}

pub fn veltman_condition(frame: &VeltmanFrame, p: Principle) -> bool {
    frame.satisfies(p)
}

pub fn gen_condition(frame: &GenFrame, p: Principle) -> bool {
    frame.satisfies(p)
}

impl FrameConditions for VeltmanFrame {
    const CLASS: FrameClass = FrameClass::Veltman;

    fn skeleton(&self) -> &Skeleton {
        VeltmanFrame::skeleton(self)
    }

    fn violation(&self, p: Principle) -> Option<String> {
        let sk = self.skeleton();
        let w = |i: usize| sk.name(i);
        let n = self.len();
        match p {
            Principle::J1 => sk
                .pairs()
                .find(|&(x, y)| !self.s_successors(x, y).contains(y))
                .map(|(x, y)| format!("{} R {} but not {1} S_{0} {1}", w(x), w(y))),
            Principle::J4 | Principle::J4Plus => self
                .s_triples()
                .find(|&(x, _, z)| !sk.relates(x, z))
                .map(|(x, y, z)| format!("{} S_{} {} but not {1} R {2}", w(y), w(x), w(z))),
            Principle::J2 | Principle::J2Plus => self.violation(Principle::J4).or_else(|| {
                self.s_triples()
                    .find_map(|(x, y, z)| {
                        let missing = self.s_successors(x, z).difference(self.s_successors(x, y));
                        missing.first().map(|u| (x, y, z, u))
                    })
                    .map(|(x, y, z, u)| {
                        format!(
                            "S_{0} is not transitive: {1} S_{0} {2} and {2} S_{0} {3} but not {1} S_{0} {3}",
                            w(x),
                            w(y),
                            w(z),
                            w(u)
                        )
                    })
            }),
            Principle::J5 => (0..n)
                .flat_map(|x| sk.successors(x).iter().map(move |y| (x, y)))
                .find_map(|(x, y)| sk.successors(y).difference(self.s_successors(x, y)).first().map(|z| (x, y, z)))
                .map(|(x, y, z)| format!("{} R {} R {} but not {1} S_{0} {2}", w(x), w(y), w(z))),
        }
    }
}

/// Calls `f` on `extra ∪ U₁ ∪ … ∪ U_k` for every choice of one `Uᵢ` from
/// each `options[i]`, stopping at the first `false`.
fn all_unions(options: &[&[BitSet]], extra: &BitSet, f: &mut impl FnMut(&BitSet) -> bool) -> bool {
    match options.split_first() {
        None => f(extra),
        Some((first, rest)) => first.iter().all(|u| all_unions(rest, &extra.union(u), f)),
    }
}

impl FrameConditions for GenFrame {
    const CLASS: FrameClass = FrameClass::Generalized;

    fn skeleton(&self) -> &Skeleton {
        GenFrame::skeleton(self)
    }

    fn violation(&self, p: Principle) -> Option<String> {
        let sk = self.skeleton();
        let w = |i: usize| sk.name(i).to_string();
        let set = |v: &BitSet| format!("{{{}}}", sk.names_of(v).join(","));
        // Every (x, y, generator) triple.
        let gens = || sk.pairs().flat_map(move |(x, y)| self.generators(x, y).iter().map(move |g| (x, y, g)));
        match p {
            Principle::J1 => sk
                .pairs()
                .find(|&(x, y)| !self.relates_to_set(x, y, &BitSet::singleton(y)))
                .map(|(x, y)| format!("{} R {} but not {1} S_{0} {{{1}}}", w(x), w(y))),
            Principle::J4 => gens()
                .find(|(x, _, g)| !g.intersects(sk.successors(*x)))
                .map(|(x, y, g)| format!("{} S_{} {} misses R[{1}]", w(y), w(x), set(g))),
            Principle::J4Plus => gens().find(|(x, _, g)| !g.is_subset(sk.successors(*x))).map(|(x, y, g)| {
                format!("{} S_{} {} but not {0} S_{1} {}", w(y), w(x), set(g), set(&g.intersection(sk.successors(x))))
            }),
            Principle::J2 => self.violation(Principle::J4).or_else(|| {
                gens().find_map(|(x, y, g)| {
                    let options: Vec<&[BitSet]> =
                        g.intersection(sk.successors(x)).iter().map(|z| self.generators(x, z)).collect();
                    let mut bad = None;
                    all_unions(&options, &BitSet::default(), &mut |u| {
                        let ok = self.relates_to_set(x, y, u);
                        if !ok {
                            bad = Some(u.clone());
                        }
                        ok
                    });
                    bad.map(|u| {
                        format!(
                            "{} S_{} {} and its members' S_{1}-sets give the union {}, which {0} does not reach",
                            w(y),
                            w(x),
                            set(g),
                            set(&u)
                        )
                    })
                })
            }),
            Principle::J2Plus => self.violation(Principle::J4).or_else(|| {
                gens().find_map(|(x, y, g)| {
                    let members: Vec<usize> = g.iter().collect();
                    (0u32..1 << members.len()).find_map(|mask| {
                        let v0: BitSet =
                            members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &z)| z).collect();
                        let v1 = g.difference(&v0);
                        let options: Vec<&[BitSet]> =
                            v0.intersection(sk.successors(x)).iter().map(|z| self.generators(x, z)).collect();
                        let mut bad = None;
                        all_unions(&options, &v1, &mut |u| {
                            let ok = self.relates_to_set(x, y, u);
                            if !ok {
                                bad = Some(u.clone());
                            }
                            ok
                        });
                        bad.map(|u| {
                            format!(
                                "{} S_{} {} split as {} ∪ {} yields {}, which {0} does not reach",
                                w(y),
                                w(x),
                                set(g),
                                set(&v0),
                                set(&v1),
                                set(&u)
                            )
                        })
                    })
                })
            }),
            Principle::J5 => sk
                .pairs()
                .find_map(|(x, y)| {
                    sk.successors(y)
                        .iter()
                        .find(|&z| !self.relates_to_set(x, y, &BitSet::singleton(z)))
                        .map(|z| (x, y, z))
                })
                .map(|(x, y, z)| format!("{} R {} R {} but not {1} S_{0} {{{2}}}", w(x), w(y), w(z))),
        }
    }
}

/// The outcome of comparing a condition with validity of the
/// characteristic instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub condition: String,
    pub instance: String,
    pub condition_holds: bool,
    pub instance_valid: bool,
    /// Why the condition fails, when it does.
    pub violation: Option<String>,
    /// A valuation (by world names) and world refuting the instance.
    pub refutation: Option<(BTreeMap<String, Vec<String>>, String)>,
}

impl AuditReport {
    pub fn agrees(&self) -> bool {
        self.condition_holds == self.instance_valid
    }
}

/// Checks the condition for `p` and, independently, validity of `p`'s
/// characteristic instance on the frame.
pub fn correspondence_audit<F: FrameConditions>(
    frame: &F,
    p: Principle,
    limit_bits: u32,
) -> Result<AuditReport, ValuationBudget> {
    let skeleton = FrameConditions::skeleton(frame);
    let instance = p.characteristic_instance();
    let validity = check_validity(frame, &instance, limit_bits)?;
    let violation = frame.violation(p);
    let refutation = match &validity {
        Validity::Valid => None,
        Validity::Refuted { valuation, world } => Some((
            valuation.iter().map(|(v, s)| (v.clone(), skeleton.names_of(s))).collect(),
            skeleton.name(*world).to_string(),
        )),
    };
    Ok(AuditReport {
        condition: ConditionId::new(F::CLASS, p).to_string(),
        instance: instance.to_string(),
        condition_holds: violation.is_none(),
        instance_valid: validity.is_valid(),
        violation,
        refutation,
    })
}

/// Veltman frames on `n` worlds that between them show every *local*
/// configuration `(R, x, S_x)` with `R` a strict order up to isomorphism:
/// one frame per order, world `x` and `S_x ⊆ R[x] × W`, with every other
/// `S_y` the full `R[y] × R[y]`.
///
/// Each condition is a conjunction over `x` of a property of `(R, S_x)`,
/// and so is validity of each characteristic instance (no instance nests
/// `▷`). The full `S_y` meet every condition, so on these frames both
/// sides reduce to world `x`; agreement on all of them is agreement on
/// every Veltman frame with `n` worlds.
pub fn veltman_sweep(n: usize) -> impl ParallelIterator<Item = VeltmanFrame> {
    let orders = posets(n);
    let sites: Vec<(usize, usize)> = (0..orders.len()).flat_map(|i| (0..n).map(move |x| (i, x))).collect();
    sites.into_par_iter().flat_map_iter(move |(i, x)| {
        let r: Vec<BitSet> = orders[i].successor_masks().iter().map(|&m| BitSet::from_word(m)).collect();
        let succ: Vec<usize> = r[x].iter().collect();
        let bits = succ.len() * n;
        let full: Vec<Vec<BitSet>> = (0..n)
            .map(|y| (0..n).map(|z| if r[y].contains(z) { r[y].clone() } else { BitSet::default() }).collect())
            .collect();
        (0u64..1 << bits).map(move |code| {
            let mut s = full.clone();
            for (k, &y) in succ.iter().enumerate() {
                s[x][y] = BitSet::from_word(code >> (k * n) & ((1 << n) - 1));
            }
            VeltmanFrame::from_parts(r.clone(), s)
        })
    })
}
