//! `Φ`-maximal consistent sets, the relations between them, and oracles
//! sorting candidate sets into consistent and inconsistent ones.
//!
//! For maximal consistent subsets `Γ, Δ` of an adequate set `Φ` and
//! `C ∈ Φ▷`:
//!
//! * `Γ ≺ Δ` iff `□B ∈ Γ ⇒ B, □B ∈ Δ` for every `□B ∈ Φ`, and some
//!   `□B ∈ Δ` is not in `Γ`;
//! * `Γ ≺_C Δ` iff `Γ ≺ Δ` and `B ▷ C ∈ Γ ⇒ ∼B ∈ Δ` for every `B ∈ Φ▷`;
//! * `Γ ≺*_C Δ` iff `Γ ≺ Δ` and `B ▷ C ∈ Γ ⇒ ∼B, □∼B ∈ Δ`.
//!
//! The exact oracle computes `K_L` as a greatest fixpoint: starting from
//! every propositionally coherent choice of one of each `{A, ∼A}`, sets
//! are discarded while some box or `▷` they lack has no witness among the
//! survivors, using the witness lemmas of the logic. Every `L`-consistent
//! set survives, so "no survivor contains `∼A`" proves `A`; that the
//! survivors are exactly `K_L` is certified by auditing a canonical model
//! built on them, in which every survivor is then satisfied.

use super::canonical::certify;
use super::procedure::{decide, Mode, Verdict};
use super::{bounded_refute, DecideError, Refutation, MAX_SEARCH_WORLDS};
use crate::bitset::BitSet;
use crate::kernel::{Logic, Principle};
use crate::syntax::{AdequateContext, Formula};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy)]
enum Node {
    Const(bool),
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
}

/// Index tables over an adequate set.
#[derive(Debug)]
pub struct ClosureIndex {
    ctx: AdequateContext,
    /// `neg[i]`: the index of `∼φᵢ`.
    neg: Vec<usize>,
    /// `(□B, B)` for every box member.
    boxes: Vec<(usize, usize)>,
    /// Member index of every `▷`-operand, in the order of
    /// `ctx.rhd_operands()`.
    ops: Vec<usize>,
    /// `rhd[d][e]`: the index of `D ▷ E`.
    rhd: Vec<Vec<usize>>,
    neg_op: Vec<usize>,
    box_neg_op: Vec<usize>,
    nodes: Vec<Node>,
    /// Member indices of the variables, boxes and `▷`-formulas.
    atoms: Vec<usize>,
}

impl ClosureIndex {
    pub fn new(ctx: AdequateContext) -> Arc<ClosureIndex> {
        let idx = |f: &Formula| ctx.index_of(f).expect("adequate sets are closed");
        let phi = ctx.formulas();
        let neg = phi.iter().map(|f| idx(&f.simneg())).collect();
        let mut boxes = Vec::new();
        let mut atoms = Vec::new();
        let mut nodes = Vec::with_capacity(phi.len());
        for (i, f) in phi.iter().enumerate() {
            let node = match f {
                Formula::Top => Node::Const(true),
                Formula::Bot => Node::Const(false),
                Formula::Var(_) | Formula::Rhd(..) => Node::Atom(atoms.len()),
                Formula::Box(b) => {
                    boxes.push((i, idx(b)));
                    Node::Atom(atoms.len())
                }
                Formula::Neg(a) => Node::Not(idx(a)),
                Formula::And(a, b) => Node::And(idx(a), idx(b)),
                Formula::Or(a, b) => Node::Or(idx(a), idx(b)),
                Formula::Imp(a, b) => Node::Imp(idx(a), idx(b)),
            };
            if matches!(node, Node::Atom(_)) {
                atoms.push(i);
            }
            nodes.push(node);
        }
        let operands = ctx.rhd_operands();
        let ops = operands.iter().map(idx).collect();
        let rhd = operands
            .iter()
            .map(|d| operands.iter().map(|e| idx(&Formula::rhd(d.clone(), e.clone()))).collect())
            .collect();
        let neg_op = operands.iter().map(|c| idx(&c.simneg())).collect();
        let box_neg_op = operands.iter().map(|c| idx(&Formula::boxed(c.simneg()))).collect();
        Arc::new(ClosureIndex { ctx, neg, boxes, ops, rhd, neg_op, box_neg_op, nodes, atoms })
    }

    pub fn ctx(&self) -> &AdequateContext {
        &self.ctx
    }

    /// Position of `c` among the `▷`-operands.
    pub fn operand(&self, c: &Formula) -> Option<usize> {
        self.ctx.rhd_operands().iter().position(|o| o == c)
    }

    pub fn operand_count(&self) -> usize {
        self.ops.len()
    }

    /// Number of variables, boxes and `▷`-formulas in the set.
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Member index of `∼φᵢ`.
    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }

    /// Member index of `∼d` for the operand `d`.
    pub(crate) fn neg_op(&self, d: usize) -> usize {
        self.neg_op[d]
    }

    /// Member index of `□∼d` for the operand `d`.
    pub(crate) fn box_neg_op(&self, d: usize) -> usize {
        self.box_neg_op[d]
    }

    /// `Γ ≺ Δ` on member sets.
    pub(crate) fn prec(&self, g: &BitSet, d: &BitSet) -> bool {
        self.boxes.iter().all(|&(b, body)| !g.contains(b) || (d.contains(b) && d.contains(body)))
            && self.boxes.iter().any(|&(b, _)| d.contains(b) && !g.contains(b))
    }

    /// What `Γ ≺_C Δ` (or `≺*_C` when `star`) asks of `Δ` beyond `Γ ≺ Δ`.
    pub(crate) fn requirement(&self, g: &BitSet, c: usize, star: bool) -> BitSet {
        let mut req = BitSet::with_capacity(self.ctx.len());
        for b in 0..self.ops.len() {
            if g.contains(self.rhd[b][c]) {
                req.insert(self.neg_op[b]);
                if star {
                    req.insert(self.box_neg_op[b]);
                }
            }
        }
        req
    }

    pub(crate) fn prec_c(&self, g: &BitSet, d: &BitSet, c: usize, star: bool) -> bool {
        self.prec(g, d) && self.requirement(g, c, star).is_subset(d)
    }

    /// Truth values of every member under an assignment to the atoms,
    /// given in the order of `atoms`.
    fn evaluate(&self, atom_value: &[bool]) -> BitSet {
        let mut t = BitSet::with_capacity(self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            let v = match *node {
                Node::Const(v) => v,
                Node::Atom(a) => atom_value[a],
                Node::Not(a) => !t.contains(a),
                Node::And(a, b) => t.contains(a) && t.contains(b),
                Node::Or(a, b) => t.contains(a) || t.contains(b),
                Node::Imp(a, b) => !t.contains(a) || t.contains(b),
            };
            if v {
                t.insert(i);
            }
        }
        t
    }

    fn formula_of(&self, i: usize) -> &Formula {
        self.ctx.get(i)
    }
}

/// Which witness lemmas hold, read off the logic's principles.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Row {
    pub j1: bool,
    pub j2: bool,
    pub j2plus: bool,
    pub j4: bool,
    pub j4plus: bool,
    pub j5: bool,
}

impl Row {
    pub fn of(logic: &Logic) -> Row {
        let ps = logic.principles();
        let has = |p| ps.contains(&p);
        Row {
            j1: has(Principle::J1),
            j2: has(Principle::J2),
            j2plus: has(Principle::J2Plus),
            j4: has(Principle::J4),
            j4plus: has(Principle::J4Plus),
            j5: has(Principle::J5),
        }
    }

    /// Whether witnesses for a missing `D ▷ E` are `≺*_E`-successors.
    pub fn starred(self) -> bool {
        self.j2 && self.j5
    }
}

/// A request for a set `Θ` with `contains ⊆ Θ` and, if `successor`,
/// `Γ ≺ Θ`.
#[derive(Debug, Clone)]
pub(crate) struct Demand {
    pub successor: bool,
    pub contains: BitSet,
}

impl Demand {
    fn met_by(&self, index: &ClosureIndex, g: &BitSet, t: &BitSet) -> bool {
        self.contains.is_subset(t) && (!self.successor || index.prec(g, t))
    }
}

impl ClosureIndex {
    fn set_of(&self, members: &[usize]) -> BitSet {
        let mut s = BitSet::with_capacity(self.ctx.len());
        members.iter().for_each(|&m| {
            s.insert(m);
        });
        s
    }

    /// Witness for `□B ∉ Γ`: `Γ ≺ Δ`, `∼B ∈ Δ`.
    pub(crate) fn box_demand(&self, body: usize) -> Demand {
        Demand { successor: true, contains: self.set_of(&[self.neg[body]]) }
    }

    /// Witness for `D ▷ E ∉ Γ`: `D ∈ Δ` and `Γ ≺_E Δ`; with `J5` also
    /// `□∼E ∈ Δ`, with `J2` and `J5` the successor is `≺*_E`.
    pub(crate) fn not_rhd_demand(&self, row: Row, g: &BitSet, d: usize, e: usize) -> Demand {
        let mut contains = self.requirement(g, e, row.starred());
        contains.insert(self.ops[d]);
        if row.j5 {
            contains.insert(self.box_neg_op[e]);
        }
        Demand { successor: true, contains }
    }

    /// Witness for `D ▷ E ∈ Γ` against a `D`-world `Δ` with `Γ ≺_F Δ`:
    /// `E, ∼F ∈ Θ`; with `J4+` also `Γ ≺ Θ`, with `J2+` `Γ ≺_F Θ`, and with
    /// `J2+` and `J5` `Γ ≺*_F Θ` and `□∼F ∈ Θ`.
    pub(crate) fn critical_rhd_demand(&self, row: Row, g: &BitSet, e: usize, f: usize) -> Demand {
        let mut contains = self.set_of(&[self.ops[e], self.neg_op[f]]);
        if row.j2plus {
            contains.union_with(&self.requirement(g, f, row.j5));
            if row.j5 {
                contains.insert(self.box_neg_op[f]);
            }
        }
        Demand { successor: row.j4plus || row.j2plus, contains }
    }

    /// Witness for `D ▷ E ∈ Γ` against an `R`-successor `Δ ∋ D` (`J4`):
    /// `Γ ≺ Θ`, `E ∈ Θ`.
    pub(crate) fn successor_rhd_demand(&self, e: usize) -> Demand {
        Demand { successor: true, contains: self.set_of(&[self.ops[e]]) }
    }

    /// Witness for `D ▷ E ∈ Γ` against a `D`-world `Δ` with `Γ ≺_F Δ`
    /// (`J2`): `Γ ≺_F Θ`, `E ∈ Θ`; with `J5`, `Γ ≺*_F Θ` and `□∼F ∈ Θ`.
    pub(crate) fn j2_rhd_demand(&self, row: Row, g: &BitSet, e: usize, f: usize) -> Demand {
        let mut contains = self.requirement(g, f, row.j5);
        contains.insert(self.ops[e]);
        if row.j5 {
            contains.insert(self.box_neg_op[f]);
        }
        Demand { successor: true, contains }
    }

    /// Every witness `Γ` needs, whether or not a set triggering it exists:
    /// each lemma's hypotheses only serve to rule out `D ▷ F ∈ Γ` (or
    /// `□∼D ∈ Γ`), which is checked directly.
    fn demands(&self, row: Row, g: &BitSet) -> Vec<Demand> {
        let mut out = Vec::new();
        for &(b, body) in &self.boxes {
            if !g.contains(b) {
                out.push(self.box_demand(body));
            }
        }
        let k = self.ops.len();
        for d in 0..k {
            for e in 0..k {
                let de = g.contains(self.rhd[d][e]);
                if !de {
                    out.push(self.not_rhd_demand(row, g, d, e));
                    continue;
                }
                if row.j4 && !g.contains(self.box_neg_op[d]) {
                    out.push(self.successor_rhd_demand(e));
                }
                for f in 0..k {
                    if !g.contains(self.rhd[d][f]) {
                        out.push(self.critical_rhd_demand(row, g, e, f));
                        if row.j2 {
                            out.push(self.j2_rhd_demand(row, g, e, f));
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| (a.successor, &a.contains).cmp(&(b.successor, &b.contains)));
        out.dedup_by(|a, b| a.successor == b.successor && a.contains == b.contains);
        out
    }
}

/// Limits on the exact computation of `K_L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    /// Most free atoms inside box bodies; box parts are enumerated over
    /// the `2^k` truth assignments to them, so at most 6.
    pub max_body_atoms: usize,
    /// Most partial assignments visited while listing candidates.
    pub max_steps: u64,
    /// Most candidate sets kept for the fixpoint.
    pub max_candidates: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits { max_body_atoms: 6, max_steps: 1 << 24, max_candidates: 1 << 16 }
    }
}

/// A literal: atom position and required value.
type Lit = (usize, bool);

/// Depth-first assignment of the atoms, boxes first.
///
/// A *type* is a truth assignment to the atoms occurring in box bodies.
/// With `A` the types allowed by the boxes set true so far, `□φ` may be
/// true when `A` shrunk to `[φ]` still leaves a type outside every false
/// box's body, and false when `A ⊄ [φ]`. This is the `K` reasoning
/// `⋀{□ψ ∈ Γ} ⊢ □φ` whenever the bodies propositionally imply `φ`.
struct Assigner<'a> {
    index: &'a ClosureIndex,
    /// Atom positions, boxes first.
    order: Vec<usize>,
    /// For the boxes in `order`: the types satisfying the body.
    masks: Vec<u64>,
    fixed: Vec<Option<bool>>,
    /// Two-literal clauses by the later position in `order` of their
    /// atoms.
    by_last: Vec<Vec<(Lit, Lit)>>,
    value: Vec<bool>,
    falses: Vec<u64>,
    out: Vec<BitSet>,
    steps: u64,
    limits: ExactLimits,
    exceeded: Option<String>,
}

impl Assigner<'_> {
    fn go(&mut self, k: usize, allowed: u64) {
        if self.exceeded.is_some() {
            return;
        }
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            self.exceeded = Some(format!("listing candidates took more than {} steps", self.limits.max_steps));
            return;
        }
        if k == self.order.len() {
            if self.out.len() == self.limits.max_candidates {
                self.exceeded = Some(format!("more than {} candidate sets", self.limits.max_candidates));
                return;
            }
            self.out.push(self.index.evaluate(&self.value));
            return;
        }
        let a = self.order[k];
        let choices: &[bool] = match self.fixed[a] {
            Some(true) => &[true],
            Some(false) => &[false],
            None => &[false, true],
        };
        for &v in choices {
            self.value[a] = v;
            let value = &self.value;
            if !self.by_last[k].iter().all(|&((x, vx), (y, vy))| value[x] == vx || value[y] == vy) {
                continue;
            }
            if k >= self.masks.len() {
                self.go(k + 1, allowed);
            } else if v {
                let narrowed = allowed & self.masks[k];
                if self.falses.iter().all(|f| narrowed & !f != 0) {
                    self.go(k + 1, narrowed);
                }
            } else if allowed & !self.masks[k] != 0 {
                self.falses.push(self.masks[k]);
                self.go(k + 1, allowed);
                self.falses.pop();
            }
        }
    }
}

impl ClosureIndex {
    /// Atom positions reachable from member `i` through boolean
    /// connectives.
    fn atoms_under(&self, i: usize, out: &mut Vec<usize>) {
        match self.nodes[i] {
            Node::Const(_) => {}
            Node::Atom(a) => out.push(a),
            Node::Not(a) => self.atoms_under(a, out),
            Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => {
                self.atoms_under(a, out);
                self.atoms_under(b, out);
            }
        }
    }

    /// Every assignment to the atoms that respects the forced values, the
    /// `K` reasoning on boxes and simple consequences of the logic,
    /// evaluated to member sets, in increasing order.
    ///
    /// Forced: `C ▷ C` with `J1`. Pruned: the two directions of
    /// `□∼D ↔ D ▷ ⊥` together with `□∼D → D ▷ E`.
    pub(crate) fn candidates(&self, logic: &Logic, limits: ExactLimits) -> Result<Vec<BitSet>, DecideError> {
        let row = Row::of(logic);
        let pos: HashMap<usize, usize> = self.atoms.iter().enumerate().map(|(p, &a)| (a, p)).collect();
        let n = self.atoms.len();
        let mut fixed: Vec<Option<bool>> = vec![None; n];
        let k = self.ops.len();
        if row.j1 {
            for c in 0..k {
                fixed[pos[&self.rhd[c][c]]] = Some(true);
            }
        }
        let mut body_atoms = Vec::new();
        for &(_, body) in &self.boxes {
            self.atoms_under(body, &mut body_atoms);
        }
        body_atoms.sort_unstable();
        body_atoms.dedup();
        body_atoms.retain(|&a| fixed[a].is_none());
        if body_atoms.len() > limits.max_body_atoms.min(6) {
            return Err(DecideError::Infeasible {
                reason: format!(
                    "box bodies mention {} atoms, more than {}",
                    body_atoms.len(),
                    limits.max_body_atoms.min(6)
                ),
                bound: None,
            });
        }
        let mut value: Vec<bool> = fixed.iter().map(|v| v.unwrap_or(false)).collect();
        let mut masks = vec![0u64; self.boxes.len()];
        for t in 0..1u64 << body_atoms.len() {
            for (j, &a) in body_atoms.iter().enumerate() {
                value[a] = t >> j & 1 == 1;
            }
            let truth = self.evaluate(&value);
            for (m, &(_, body)) in masks.iter_mut().zip(&self.boxes) {
                if truth.contains(body) {
                    *m |= 1 << t;
                }
            }
        }
        let order: Vec<usize> = self
            .boxes
            .iter()
            .map(|(b, _)| pos[b])
            .chain((0..n).filter(|a| !matches!(self.formula_of(self.atoms[*a]), Formula::Box(_))))
            .collect();
        let rank: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let bot = self.operand(&Formula::Bot).expect("⊥ is always an operand");
        let mut by_last: Vec<Vec<(Lit, Lit)>> = vec![Vec::new(); n];
        let mut clause = |l1: Lit, l2: Lit| by_last[rank[&l1.0].max(rank[&l2.0])].push((l1, l2));
        for d in 0..k {
            let bx = pos[&self.box_neg_op[d]];
            clause((pos[&self.rhd[d][bot]], false), (bx, true));
            for e in 0..k {
                clause((bx, false), (pos[&self.rhd[d][e]], true));
            }
        }
        let mut a = Assigner {
            index: self,
            order,
            masks,
            fixed,
            by_last,
            value: vec![false; n],
            falses: Vec::new(),
            out: Vec::new(),
            steps: 0,
            limits,
            exceeded: None,
        };
        a.go(0, u64::MAX >> (64 - (1u32 << body_atoms.len()).min(64)));
        if let Some(reason) = a.exceeded {
            return Err(DecideError::Infeasible { reason, bound: None });
        }
        let mut out = a.out;
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// `succ[i]`: positions `j` with `sets[i] ≺ sets[j]`. Sets with the
    /// same boxes have the same successors, so one row is computed per box
    /// part.
    pub(crate) fn successor_table(&self, sets: &[BitSet]) -> Vec<BitSet> {
        let (group_of, reps) = self.box_groups(sets);
        let rows: Vec<BitSet> =
            reps.par_iter().map(|&r| (0..sets.len()).filter(|&j| self.prec(&sets[r], &sets[j])).collect()).collect();
        group_of.into_iter().map(|g| rows[g].clone()).collect()
    }

    /// Each set's box-part class, and one representative per class.
    fn box_groups(&self, sets: &[BitSet]) -> (Vec<usize>, Vec<usize>) {
        let mut ids: HashMap<BitSet, usize> = HashMap::new();
        let mut reps = Vec::new();
        let group_of = sets
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let part: BitSet = self.boxes.iter().map(|&(b, _)| b).filter(|&b| g.contains(b)).collect();
                *ids.entry(part).or_insert_with(|| {
                    reps.push(i);
                    reps.len() - 1
                })
            })
            .collect();
        (group_of, reps)
    }

    /// The greatest subset of `candidates` in which every member has a
    /// witness for each of its demands; returns the survivors' positions.
    pub(crate) fn fixpoint(&self, logic: &Logic, candidates: &[BitSet]) -> Vec<usize> {
        let row = Row::of(logic);
        let n = candidates.len();
        let (group_of, reps) = self.box_groups(candidates);
        let succ: Vec<BitSet> =
            reps.par_iter().map(|&r| (0..n).filter(|&j| self.prec(&candidates[r], &candidates[j])).collect()).collect();
        // Demands are shared between sets; each distinct one is resolved once.
        let per_set: Vec<Vec<Demand>> = candidates.par_iter().map(|g| self.demands(row, g)).collect();
        let mut ids: HashMap<(Option<usize>, BitSet), usize> = HashMap::new();
        let mut keys: Vec<(Option<usize>, BitSet)> = Vec::new();
        let needs: Vec<Vec<usize>> = per_set
            .into_iter()
            .enumerate()
            .map(|(i, ds)| {
                ds.into_iter()
                    .map(|d| {
                        let key = (d.successor.then_some(group_of[i]), d.contains);
                        *ids.entry(key.clone()).or_insert_with(|| {
                            keys.push(key);
                            keys.len() - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let mut witness: Vec<Option<usize>> = vec![None; keys.len()];
        let mut unmet = vec![false; keys.len()];
        let mut alive = BitSet::full(n);
        loop {
            let stale: Vec<usize> =
                (0..keys.len()).filter(|&d| !unmet[d] && witness[d].is_none_or(|w| !alive.contains(w))).collect();
            let found: Vec<Option<usize>> = stale
                .par_iter()
                .map(|&d| {
                    let (group, contains) = &keys[d];
                    let pool = match group {
                        Some(g) => succ[*g].intersection(&alive),
                        None => alive.clone(),
                    };
                    pool.iter().find(|&j| contains.is_subset(&candidates[j]))
                })
                .collect();
            for (d, w) in stale.into_iter().zip(found) {
                witness[d] = w;
                unmet[d] = w.is_none();
            }
            let dead: Vec<usize> = alive.iter().filter(|&i| needs[i].iter().any(|&d| unmet[d])).collect();
            if dead.is_empty() {
                return alive.iter().collect();
            }
            for i in dead {
                alive.remove(i);
            }
        }
    }
}

/// A maximal consistent subset of an adequate set.
#[derive(Clone)]
pub struct MCSet {
    index: Arc<ClosureIndex>,
    members: BitSet,
}

impl MCSet {
    pub(crate) fn new(index: Arc<ClosureIndex>, members: BitSet) -> MCSet {
        MCSet { index, members }
    }

    pub fn index(&self) -> &Arc<ClosureIndex> {
        &self.index
    }

    /// Members as indices into the adequate set.
    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.ctx.index_of(f).is_some_and(|i| self.members.contains(i))
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.members.iter().map(|i| self.index.ctx.get(i))
    }

    fn same_context(&self, other: &MCSet) -> Result<(), DecideError> {
        if Arc::ptr_eq(&self.index, &other.index) || self.index.ctx == other.index.ctx {
            Ok(())
        } else {
            Err(DecideError::ContextMismatch)
        }
    }

    fn operand(&self, c: &Formula) -> Result<usize, DecideError> {
        self.index.operand(c).ok_or_else(|| DecideError::NotAnOperand(c.to_string()))
    }
}

impl PartialEq for MCSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.index.ctx == other.index.ctx
    }
}

impl Eq for MCSet {}

impl fmt::Debug for MCSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.formulas()).finish()
    }
}

/// `Γ ≺ Δ`.
pub fn prec(g: &MCSet, d: &MCSet) -> Result<bool, DecideError> {
    g.same_context(d)?;
    Ok(g.index.prec(&g.members, &d.members))
}

/// `Γ ≺_C Δ`; `C` must be a `▷`-operand of the context.
pub fn prec_c(g: &MCSet, d: &MCSet, c: &Formula) -> Result<bool, DecideError> {
    g.same_context(d)?;
    let c = g.operand(c)?;
    Ok(g.index.prec_c(&g.members, &d.members, c, false))
}

/// `Γ ≺*_C Δ`; `C` must be a `▷`-operand of the context.
pub fn prec_c_star(g: &MCSet, d: &MCSet, c: &Formula) -> Result<bool, DecideError> {
    g.same_context(d)?;
    let c = g.operand(c)?;
    Ok(g.index.prec_c(&g.members, &d.members, c, true))
}

/// Answer of an [`Oracle`] about a single formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    Proved,
    Refuted(Box<Refutation>),
    Unknown,
}

/// Candidate sets split by an [`Oracle`].
#[derive(Debug, Clone, Default)]
pub struct Filtered {
    pub consistent: Vec<BitSet>,
    pub undecided: Vec<BitSet>,
}

/// Decides (or fails to decide) `L`-provability and `L`-consistency.
pub trait Oracle: Sync {
    fn query(&self, logic: &Logic, a: &Formula) -> Result<OracleAnswer, DecideError>;

    /// Splits candidate sets, given in increasing order, into consistent
    /// and undecided ones; inconsistent candidates are dropped.
    fn filter(
        &self,
        logic: &Logic,
        index: &Arc<ClosureIndex>,
        candidates: Vec<BitSet>,
    ) -> Result<Filtered, DecideError>;

    /// Limits on listing the candidates passed to [`Oracle::filter`].
    fn limits(&self) -> ExactLimits {
        ExactLimits::default()
    }
}

/// The fixpoint computation, certified by a canonical-model audit.
///
/// Without certification the result is an upper approximation: every
/// consistent set is among the survivors, which is all that proving a
/// formula or ruling out a root needs.
#[derive(Debug, Clone, Copy)]
pub struct ExactOracle {
    pub limits: ExactLimits,
    pub certify: bool,
}

impl Default for ExactOracle {
    fn default() -> Self {
        ExactOracle { limits: ExactLimits::default(), certify: true }
    }
}

impl Oracle for ExactOracle {
    fn query(&self, logic: &Logic, a: &Formula) -> Result<OracleAnswer, DecideError> {
        Ok(match decide(logic, a, Mode::Exact)? {
            Verdict::Theorem => OracleAnswer::Proved,
            Verdict::NonTheorem(r) => OracleAnswer::Refuted(r),
            Verdict::Unknown => OracleAnswer::Unknown,
        })
    }

    fn filter(
        &self,
        logic: &Logic,
        index: &Arc<ClosureIndex>,
        candidates: Vec<BitSet>,
    ) -> Result<Filtered, DecideError> {
        let survivors: Vec<BitSet> =
            index.fixpoint(logic, &candidates).into_iter().map(|i| candidates[i].clone()).collect();
        let kl = Kl::new(logic.clone(), index.clone(), survivors, Vec::new());
        if self.certify {
            certify(&kl)?;
        }
        Ok(Filtered { consistent: kl.sets.into_iter().map(|s| s.members).collect(), undecided: Vec::new() })
    }

    fn limits(&self) -> ExactLimits {
        self.limits
    }
}

/// Countermodel search up to a number of worlds: refutations and
/// satisfying models are found, everything else stays unknown.
#[derive(Debug, Clone, Copy)]
pub struct BoundedOracle {
    pub max_worlds: usize,
}

impl Oracle for BoundedOracle {
    fn query(&self, logic: &Logic, a: &Formula) -> Result<OracleAnswer, DecideError> {
        check_budget(self.max_worlds)?;
        Ok(match bounded_refute(logic, a, self.max_worlds) {
            Some(r) => OracleAnswer::Refuted(Box::new(r)),
            None => OracleAnswer::Unknown,
        })
    }

    fn filter(
        &self,
        logic: &Logic,
        index: &Arc<ClosureIndex>,
        candidates: Vec<BitSet>,
    ) -> Result<Filtered, DecideError> {
        check_budget(self.max_worlds)?;
        let satisfiable: Vec<bool> = candidates
            .par_iter()
            .map(|g| {
                let conj = Formula::big_and(g.iter().map(|i| index.ctx.get(i).clone()));
                bounded_refute(logic, &Formula::not(conj), self.max_worlds).is_some()
            })
            .collect();
        let mut out = Filtered::default();
        for (g, sat) in candidates.into_iter().zip(satisfiable) {
            if sat {
                out.consistent.push(g)
            } else {
                out.undecided.push(g)
            }
        }
        Ok(out)
    }
}

pub(crate) fn check_budget(n: usize) -> Result<(), DecideError> {
    if (1..=MAX_SEARCH_WORLDS).contains(&n) {
        Ok(())
    } else {
        Err(DecideError::BadBudget(n))
    }
}

/// The maximal consistent subsets of an adequate set, as far as an oracle
/// could decide them, with `≺` and ranks precomputed.
#[derive(Debug, Clone)]
pub struct Kl {
    logic: Logic,
    index: Arc<ClosureIndex>,
    sets: Vec<MCSet>,
    undecided: Vec<MCSet>,
    /// `succ[i]`: positions `j` with `sets[i] ≺ sets[j]`.
    succ: Vec<BitSet>,
    rank: Vec<usize>,
}

/// Enumerates `K_L` over `ctx`: candidates choosing one of each `{A, ∼A}`
/// (propositionally coherent and respecting the logic's simplest
/// consequences) are split by the oracle.
pub fn enumerate_kl(logic: &Logic, ctx: &AdequateContext, oracle: &dyn Oracle) -> Result<Kl, DecideError> {
    let index = ClosureIndex::new(ctx.clone());
    let candidates = index.candidates(logic, oracle.limits())?;
    let f = oracle.filter(logic, &index, candidates)?;
    Ok(Kl::new(logic.clone(), index, f.consistent, f.undecided))
}

impl Kl {
    pub(crate) fn new(logic: Logic, index: Arc<ClosureIndex>, sets: Vec<BitSet>, undecided: Vec<BitSet>) -> Kl {
        let n = sets.len();
        let succ = index.successor_table(&sets);
        // ≺ strictly grows the set of boxes, so it is acyclic.
        let mut rank = vec![usize::MAX; n];
        fn rank_of(i: usize, succ: &[BitSet], memo: &mut [usize]) -> usize {
            if memo[i] == usize::MAX {
                memo[i] = succ[i].iter().map(|j| rank_of(j, succ, memo) + 1).max().unwrap_or(0);
            }
            memo[i]
        }
        for i in 0..n {
            rank_of(i, &succ, &mut rank);
        }
        let wrap = |v: Vec<BitSet>| v.into_iter().map(|m| MCSet::new(index.clone(), m)).collect();
        Kl { sets: wrap(sets), undecided: wrap(undecided), logic, index, succ, rank }
    }

    pub fn logic(&self) -> &Logic {
        &self.logic
    }

    pub fn index(&self) -> &Arc<ClosureIndex> {
        &self.index
    }

    /// The sets found consistent, in increasing order of member bitmask.
    pub fn sets(&self) -> &[MCSet] {
        &self.sets
    }

    /// Candidates the oracle could not decide.
    pub fn undecided(&self) -> &[MCSet] {
        &self.undecided
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn position(&self, g: &MCSet) -> Option<usize> {
        self.sets.binary_search_by(|s| s.members.cmp(&g.members)).ok()
    }

    /// Positions `j` with `sets[i] ≺ sets[j]`.
    pub fn successors(&self, i: usize) -> &BitSet {
        &self.succ[i]
    }

    /// Length of the longest `≺`-chain starting at `sets[i]`.
    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn max_rank(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    fn own(&self, g: &MCSet) -> Result<(), DecideError> {
        if g.index.ctx != self.index.ctx {
            Err(DecideError::ContextMismatch)
        } else {
            Ok(())
        }
    }

    fn member(&self, f: &Formula) -> Result<usize, DecideError> {
        self.index.ctx.index_of(f).ok_or_else(|| DecideError::NotInClosure(f.to_string()))
    }

    fn operand(&self, c: &Formula) -> Result<usize, DecideError> {
        self.index.operand(c).ok_or_else(|| DecideError::NotAnOperand(c.to_string()))
    }

    /// The least set (by member bitmask) meeting `dm` for `g`.
    fn witness(&self, lemma: &str, g: &MCSet, dm: &Demand) -> Result<MCSet, DecideError> {
        self.sets
            .iter()
            .find(|t| dm.met_by(&self.index, &g.members, &t.members))
            .cloned()
            .ok_or_else(|| DecideError::WitnessNotFound(format!("{lemma} for {g:?}")))
    }

    fn require(&self, cond: bool, what: impl FnOnce() -> String) -> Result<(), DecideError> {
        if cond {
            Ok(())
        } else {
            Err(DecideError::Hypothesis(what()))
        }
    }

    /// For `D ▷ E ∉ Γ`: a `Δ ∋ D` with `Γ ≺_E Δ`; with `J5` also
    /// `□∼E ∈ Δ`, and with `J2` and `J5` `Γ ≺*_E Δ`.
    pub fn witness_not_rhd(&self, g: &MCSet, d: &Formula, e: &Formula) -> Result<MCSet, DecideError> {
        self.own(g)?;
        let (di, ei) = (self.operand(d)?, self.operand(e)?);
        self.require(!g.members.contains(self.index.rhd[di][ei]), || {
            format!("{} is in Γ", Formula::rhd(d.clone(), e.clone()))
        })?;
        self.witness("¬▷ witness", g, &self.index.not_rhd_demand(Row::of(&self.logic), &g.members, di, ei))
    }

    fn triggered(&self, g: &MCSet, delta: &MCSet, d: usize, e: usize, f: usize) -> Result<(), DecideError> {
        self.own(delta)?;
        let ix = &self.index;
        self.require(g.members.contains(ix.rhd[d][e]), || "D ▷ E is not in Γ".into())?;
        self.require(ix.prec_c(&g.members, &delta.members, f, false), || "Γ ≺_F Δ fails".into())?;
        self.require(delta.members.contains(ix.ops[d]), || "D is not in Δ".into())
    }

    /// For `D ▷ E ∈ Γ`, `Γ ≺_F Δ`, `D ∈ Δ`: a `Θ ∋ E, ∼F`; with `J4+`
    /// also `Γ ≺ Θ`, with `J2+` `Γ ≺_F Θ`, and with `J2+` and `J5`
    /// `Γ ≺*_F Θ` and `□∼F ∈ Θ`.
    pub fn witness_critical_rhd(
        &self,
        g: &MCSet,
        delta: &MCSet,
        d: &Formula,
        e: &Formula,
        f: &Formula,
    ) -> Result<MCSet, DecideError> {
        self.own(g)?;
        let (di, ei, fi) = (self.operand(d)?, self.operand(e)?, self.operand(f)?);
        self.triggered(g, delta, di, ei, fi)?;
        self.witness("critical ▷ witness", g, &self.index.critical_rhd_demand(Row::of(&self.logic), &g.members, ei, fi))
    }

    /// For logics with `J4`, `D ▷ E ∈ Γ`, `Γ ≺ Δ`, `D ∈ Δ`: a `Θ ∋ E`
    /// with `Γ ≺ Θ`.
    pub fn witness_successor_rhd(
        &self,
        g: &MCSet,
        delta: &MCSet,
        d: &Formula,
        e: &Formula,
    ) -> Result<MCSet, DecideError> {
        self.own(g)?;
        self.own(delta)?;
        let (di, ei) = (self.operand(d)?, self.operand(e)?);
        let ix = &self.index;
        self.require(Row::of(&self.logic).j4, || format!("{} does not prove J4", self.logic))?;
        self.require(g.members.contains(ix.rhd[di][ei]), || "D ▷ E is not in Γ".into())?;
        self.require(ix.prec(&g.members, &delta.members), || "Γ ≺ Δ fails".into())?;
        self.require(delta.members.contains(ix.ops[di]), || "D is not in Δ".into())?;
        self.witness("J4 ▷ witness", g, &ix.successor_rhd_demand(ei))
    }

    /// For logics with `J2`, `D ▷ E ∈ Γ`, `Γ ≺_F Δ`, `D ∈ Δ`: a `Θ ∋ E`
    /// with `Γ ≺_F Θ`; with `J5`, `Γ ≺*_F Θ` and `□∼F ∈ Θ`.
    pub fn witness_j2_rhd(
        &self,
        g: &MCSet,
        delta: &MCSet,
        d: &Formula,
        e: &Formula,
        f: &Formula,
    ) -> Result<MCSet, DecideError> {
        self.own(g)?;
        let (di, ei, fi) = (self.operand(d)?, self.operand(e)?, self.operand(f)?);
        self.require(Row::of(&self.logic).j2, || format!("{} does not prove J2", self.logic))?;
        self.triggered(g, delta, di, ei, fi)?;
        self.witness("J2 ▷ witness", g, &self.index.j2_rhd_demand(Row::of(&self.logic), &g.members, ei, fi))
    }

    /// Checks `Γ ≺ Δ ⇒ Γ ≺*_⊥ Δ` on all pairs and
    /// `Γ ≺*_C Δ ∧ Δ ≺ Θ ⇒ Γ ≺*_C Θ` on all triples and operands `C`.
    pub fn audit_prec_lemmas(&self) -> Result<(), DecideError> {
        let ix = &self.index;
        let bot = self.operand(&Formula::Bot)?;
        let members = |i: usize| &self.sets[i].members;
        (0..self.sets.len()).into_par_iter().try_for_each(|g| {
            for d in self.succ[g].iter() {
                if !ix.prec_c(members(g), members(d), bot, true) {
                    return Err(DecideError::Audit(format!(
                        "≺ ⊆ ≺*_⊥ fails for {:?} ≺ {:?}",
                        self.sets[g], self.sets[d]
                    )));
                }
                for c in 0..ix.ops.len() {
                    if !ix.prec_c(members(g), members(d), c, true) {
                        continue;
                    }
                    if let Some(t) = self.succ[d].iter().find(|&t| !ix.prec_c(members(g), members(t), c, true)) {
                        return Err(DecideError::Audit(format!(
                            "≺*_C ∘ ≺ ⊆ ≺*_C fails for {:?}, {:?}, {:?} at {}",
                            self.sets[g],
                            self.sets[d],
                            self.sets[t],
                            ix.ctx.rhd_operands()[c]
                        )));
                    }
                }
            }
            Ok(())
        })
    }

    /// Whether some set contains `f`.
    pub fn satisfiable(&self, f: &Formula) -> Result<bool, DecideError> {
        let i = self.member(f)?;
        Ok(self.sets.iter().any(|s| s.members.contains(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{adequate_closure, parse};

    fn kl(logic: &str, seed: &str) -> Kl {
        let ctx = adequate_closure(&[parse(seed).unwrap()]);
        enumerate_kl(&Logic::by_name(logic).unwrap(), &ctx, &ExactOracle::default()).unwrap()
    }

    #[test]
    fn closure_of_a_variable_has_two_sets() {
        let k = kl("IL-", "p");
        assert_eq!(k.len(), 2);
        let p = parse("p").unwrap();
        assert_eq!(k.sets().iter().filter(|s| s.contains(&p)).count(), 1);
        assert!(k.undecided().is_empty());
        assert_eq!(k.max_rank(), 0);
    }

    #[test]
    fn sets_are_maximal_and_negation_complete() {
        let k = kl("IL-(J1)", "[]p");
        let ix = k.index();
        for s in k.sets() {
            for i in 0..ix.ctx().len() {
                assert_ne!(s.members().contains(i), s.members().contains(ix.neg(i)));
            }
        }
    }

    #[test]
    fn prec_is_transitive_and_irreflexive() {
        let k = kl("IL-", "[]p");
        assert!(k.max_rank() >= 1);
        for (i, g) in k.sets().iter().enumerate() {
            assert!(!prec(g, g).unwrap());
            for j in k.successors(i) {
                assert!(k.successors(j).is_subset(k.successors(i)));
            }
        }
    }

    #[test]
    fn starred_successors_are_critical_successors() {
        let k = kl("IL-(J5)", "p |> p");
        for g in k.sets() {
            for d in k.sets() {
                for c in k.index().ctx().rhd_operands() {
                    if prec_c_star(g, d, c).unwrap() {
                        assert!(prec_c(g, d, c).unwrap());
                    }
                    if prec_c(g, d, c).unwrap() {
                        assert!(prec(g, d).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn contexts_must_match() {
        let a = kl("IL-", "p");
        let b = kl("IL-", "q");
        assert_eq!(prec(&a.sets()[0], &b.sets()[0]), Err(DecideError::ContextMismatch));
        let q = parse("q").unwrap();
        assert!(matches!(prec_c(&a.sets()[0], &a.sets()[0], &q), Err(DecideError::NotAnOperand(_))));
    }

    #[test]
    fn witnesses_missing_interpretability() {
        let k = kl("IL-", "p |> p");
        let (p, pp) = (parse("p").unwrap(), parse("p |> p").unwrap());
        let g = k.sets().iter().find(|s| !s.contains(&pp)).expect("p ▷ p is not an IL⁻ theorem");
        let w = k.witness_not_rhd(g, &p, &p).unwrap();
        assert!(w.contains(&p));
        assert!(prec_c(g, &w, &p).unwrap());
        let h = k.sets().iter().find(|s| s.contains(&pp)).unwrap();
        assert!(matches!(k.witness_not_rhd(h, &p, &p), Err(DecideError::Hypothesis(_))));
    }

    #[test]
    fn j1_makes_p_interpret_p() {
        let k = kl("IL-(J1)", "p |> p");
        let pp = parse("p |> p").unwrap();
        assert!(k.sets().iter().all(|s| s.contains(&pp)));
    }

    #[test]
    fn successor_witness_needs_j4() {
        let k = kl("IL-", "p |> p");
        let p = parse("p").unwrap();
        let g = &k.sets()[0];
        assert!(matches!(k.witness_successor_rhd(g, g, &p, &p), Err(DecideError::Hypothesis(_))));
    }

    #[test]
    fn bounded_oracle_agrees_on_small_context() {
        let ctx = adequate_closure(&[parse("[]p").unwrap()]);
        let logic = Logic::il_minus();
        let bounded = enumerate_kl(&logic, &ctx, &BoundedOracle { max_worlds: 3 }).unwrap();
        let exact = enumerate_kl(&logic, &ctx, &ExactOracle::default()).unwrap();
        assert!(bounded.undecided().is_empty());
        assert_eq!(bounded.sets(), exact.sets());
    }

    #[test]
    fn prec_lemmas_hold() {
        for (logic, seed) in [("IL-", "p"), ("IL-(J5)", "[]p"), ("IL", "p |> p"), ("IL-(J2,J5)", "[]p")] {
            kl(logic, seed).audit_prec_lemmas().unwrap();
        }
    }

    #[test]
    fn critical_and_j2_witnesses() {
        let k = kl("IL-(J2,J5)", "p |> p");
        let (p, bot) = (parse("p").unwrap(), Formula::Bot);
        let rhd = Formula::rhd(p.clone(), p.clone());
        let mut hits = 0;
        for g in k.sets().iter().filter(|g| g.contains(&rhd)) {
            for delta in k.sets().iter().filter(|d| d.contains(&p) && prec_c(g, d, &bot).unwrap()) {
                let t = k.witness_critical_rhd(g, delta, &p, &p, &bot).unwrap();
                assert!(t.contains(&p) && prec_c_star(g, &t, &bot).unwrap());
                let t = k.witness_j2_rhd(g, delta, &p, &p, &bot).unwrap();
                assert!(t.contains(&p) && prec_c_star(g, &t, &bot).unwrap());
                hits += 1;
            }
        }
        assert!(hits > 0);
        let g = k.sets().iter().find(|g| !g.contains(&rhd)).unwrap();
        assert!(matches!(k.witness_critical_rhd(g, g, &p, &p, &bot), Err(DecideError::Hypothesis(_))));
    }
}
