//! Bounded countermodel search.
//!
//! Candidates are enumerated by number of worlds, then order type (one
//! representative per isomorphism class, see [`posets`]), then valuation,
//! then refuting world, with the `S`-part chosen last. The first refutation
//! in this order is returned, so results do not depend on scheduling.
//!
//! When no `▷` occurs inside an operand of another `▷`, the operands'
//! truth sets depend only on `R` and the valuation. Each `▷`-subformula is
//! then abstracted to a fresh letter, and for every world `x` the search
//! collects the *profiles* — which `▷`-subformulas hold at `x` — that some
//! admissible `S_x` realizes. Frame conditions are local to `x`, so
//! profiles of different worlds combine freely. Without `J2`/`J2+`, `S_x`
//! also factors over its arguments `y`, and profiles are built one `y` at a
//! time. Otherwise whole `S`-configurations are enumerated.
//!
//! For generalized frames the enumeration is complete when the `S_x` factor
//! over `y`; with `J2`/`J2+` each pair gets its forced generators plus at
//! most [`GEN_EXTRA_GENERATORS`] others.

use super::posets::{ones, posets, Poset, MAX_POSET_SIZE};
use super::{Countermodel, Refutation};
use crate::bitset::BitSet;
use crate::genveltman::{reduce_to_antichain, GenFrame, GenModel};
use crate::kernel::{FrameClass, Logic, Principle};
use crate::semantics::{Program, Structure, Valuation};
use crate::syntax::Formula;
use crate::veltman::{VeltmanFrame, VeltmanModel};
use rayon::prelude::*;
use std::collections::HashSet;

/// Largest frame the search enumerates.
pub const MAX_SEARCH_WORLDS: usize = MAX_POSET_SIZE;

/// Generators per pair, beyond forced ones, in searches over generalized
/// frames with `J2` or `J2+`.
pub const GEN_EXTRA_GENERATORS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_worlds: usize,
    /// Which kind of frame to search.
    pub class: FrameClass,
}

impl SearchOptions {
    /// Searches the class the logic is complete for.
    pub fn for_logic(logic: &Logic, max_worlds: usize) -> SearchOptions {
        SearchOptions { max_worlds, class: logic.complete_class() }
    }
}

/// Looks for a model of `logic`'s complete class with at most `max_worlds`
/// worlds refuting `a`.
///
/// # Panics
///
/// Unless `1 ≤ max_worlds ≤ MAX_SEARCH_WORLDS`.
pub fn bounded_refute(logic: &Logic, a: &Formula, max_worlds: usize) -> Option<Refutation> {
    bounded_refute_with(logic, a, SearchOptions::for_logic(logic, max_worlds))
}

/// [`bounded_refute`] with an explicit frame class. Searching generalized
/// frames is sound for every logic; Veltman frames with the Veltman
/// conditions of the logic's principles are sound for every logic too, but
/// complete only for those whose complete class they are.
pub fn bounded_refute_with(logic: &Logic, a: &Formula, opts: SearchOptions) -> Option<Refutation> {
    assert!(
        (1..=MAX_SEARCH_WORLDS).contains(&opts.max_worlds),
        "the search handles 1 to {MAX_SEARCH_WORLDS} worlds, not {}",
        opts.max_worlds
    );
    let rules = Rules::new(logic, opts.class);
    let problem = Problem::new(a);
    for n in 1..=opts.max_worlds {
        let found = posets(n).par_iter().find_map_first(|p| search_order(&rules, &problem, p));
        if let Some(r) = found {
            assert!(r.verify(logic, a), "search produced a countermodel that does not re-verify");
            return Some(r);
        }
    }
    None
}

/// The frame conditions in force, by kind.
#[derive(Debug, Clone, Copy)]
struct Rules {
    gen: bool,
    j1: bool,
    j4: bool,
    j4plus: bool,
    j2: bool,
    j2plus: bool,
    j5: bool,
}

impl Rules {
    fn new(logic: &Logic, class: FrameClass) -> Rules {
        let ps = logic.principles();
        let has = |p| ps.contains(&p);
        let j1 = has(Principle::J1);
        let j5 = has(Principle::J5);
        match class {
            // The Veltman conditions for J4 and J4+ coincide, as do those
            // for J2 and J2+.
            FrameClass::Veltman => {
                let j4 = has(Principle::J4) || has(Principle::J4Plus);
                let j2 = has(Principle::J2) || has(Principle::J2Plus);
                Rules { gen: false, j1, j4, j4plus: j4, j2, j2plus: j2, j5 }
            }
            FrameClass::Generalized => Rules {
                gen: true,
                j1,
                j4: has(Principle::J4),
                j4plus: has(Principle::J4Plus),
                j2: has(Principle::J2),
                j2plus: has(Principle::J2Plus),
                j5,
            },
        }
    }

    fn coupled(&self) -> bool {
        self.j2 || self.j2plus
    }
}

/// Where a program variable's values come from.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Real(usize),
    Fresh(usize),
}

/// The formula, prepared for the search.
struct Problem {
    vars: Vec<String>,
    /// Distinct `▷`-subformulas, in formula order.
    rhds: usize,
    /// Whether no `▷` occurs inside a `▷`-operand.
    factored: bool,
    /// Whether some `▷` occurs under `□`, so that its truth at successors
    /// of the refuting world matters.
    needs_cone: bool,
    /// Roots: the abstracted formula, then each `▷`'s left and right
    /// operand (factored case); or just the formula (otherwise).
    program: Program,
    slots: Vec<Slot>,
}

fn fresh(k: usize) -> String {
    format!("#{k}")
}

fn abstract_rhd(f: &Formula, index: &[Formula]) -> Formula {
    match f {
        Formula::Rhd(..) => Formula::var(fresh(index.binary_search(f).expect("collected"))),
        Formula::Var(_) | Formula::Bot | Formula::Top => f.clone(),
        Formula::Neg(a) => Formula::not(abstract_rhd(a, index)),
        Formula::Box(a) => Formula::boxed(abstract_rhd(a, index)),
        Formula::And(a, b) => Formula::and(abstract_rhd(a, index), abstract_rhd(b, index)),
        Formula::Or(a, b) => Formula::or(abstract_rhd(a, index), abstract_rhd(b, index)),
        Formula::Imp(a, b) => Formula::imp(abstract_rhd(a, index), abstract_rhd(b, index)),
    }
}

fn rhd_under_box(f: &Formula, inside: bool) -> bool {
    match f {
        Formula::Rhd(..) => inside,
        Formula::Box(a) => rhd_under_box(a, true),
        _ => f.children().any(|c| rhd_under_box(c, inside)),
    }
}

impl Problem {
    fn new(a: &Formula) -> Problem {
        let vars: Vec<String> = a.vars().into_iter().collect();
        let rhds: Vec<Formula> = a.subformulas().into_iter().filter(|f| matches!(f, Formula::Rhd(..))).collect();
        let factored = rhds.len() < 64
            && rhds.iter().all(|f| match f {
                Formula::Rhd(l, r) => !l.has_rhd() && !r.has_rhd(),
                _ => unreachable!(),
            });
        let program = if factored {
            let skeleton = abstract_rhd(a, &rhds);
            let operands = rhds.iter().flat_map(|f| f.children());
            Program::new(std::iter::once(&skeleton).chain(operands))
        } else {
            Program::new([a])
        };
        let slots = program
            .vars()
            .iter()
            .map(|v| match v.strip_prefix('#') {
                Some(k) => Slot::Fresh(k.parse().expect("fresh letter")),
                None => Slot::Real(vars.binary_search(v).expect("formula variable")),
            })
            .collect();
        Problem { vars, rhds: rhds.len(), factored, needs_cone: rhd_under_box(a, false), program, slots }
    }
}

/// A structure with `R` only; used where no `▷` is evaluated.
struct Bare<'a>(&'a [BitSet]);

impl Structure for Bare<'_> {
    fn world_count(&self) -> usize {
        self.0.len()
    }

    fn successors(&self, x: usize) -> &BitSet {
        &self.0[x]
    }

    fn interprets(&self, _: usize, _: usize, _: &BitSet) -> bool {
        false
    }
}

/// `S_x` as world masks indexed by `y`: for Veltman frames at most one mask
/// (the `S_x`-successors of `y`), for generalized frames the generators.
type XConf = Vec<Vec<u64>>;

/// A fully specified `S` over a fixed order.
struct Explicit<'a> {
    sets: &'a [BitSet],
    gen: bool,
    confs: Vec<&'a XConf>,
}

impl Structure for Explicit<'_> {
    fn world_count(&self) -> usize {
        self.sets.len()
    }

    fn successors(&self, x: usize) -> &BitSet {
        &self.sets[x]
    }

    fn interprets(&self, x: usize, y: usize, target: &BitSet) -> bool {
        let t = target.low_word();
        let c = &self.confs[x][y];
        if self.gen {
            c.iter().any(|&g| g & !t == 0)
        } else {
            c.iter().any(|&m| m & t != 0)
        }
    }
}

/// Per-order data shared by every valuation.
struct Order<'a> {
    rules: &'a Rules,
    n: usize,
    succ: &'a [u64],
    sets: Vec<BitSet>,
    /// Admissible generators at each `x` (generalized frames).
    allowed_gens: Vec<Vec<u64>>,
    /// Whole-`S_x` enumerations, built on first use.
    listed: Vec<Option<Vec<XConf>>>,
}

impl<'a> Order<'a> {
    fn new(rules: &'a Rules, poset: &'a Poset) -> Order<'a> {
        let succ = poset.successor_masks();
        let n = succ.len();
        let allowed_gens = (0..n)
            .map(|x| {
                let rx = succ[x];
                (1u64..1 << n)
                    .filter(|&g| !rules.j4 || g & rx != 0)
                    .filter(|&g| !rules.j4plus || g & !rx == 0)
                    .collect()
            })
            .collect();
        Order {
            rules,
            n,
            succ,
            sets: succ.iter().map(|&m| BitSet::from_word(m)).collect(),
            allowed_gens,
            listed: vec![None; n],
        }
    }

    fn full(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// Veltman targets every `y S_x ·` must include.
    fn forced_targets(&self, y: usize) -> u64 {
        (if self.rules.j1 { 1 << y } else { 0 }) | if self.rules.j5 { self.succ[y] } else { 0 }
    }

    fn forced_gens(&self, y: usize) -> Vec<u64> {
        let mut g = Vec::new();
        if self.rules.j1 {
            g.push(1 << y);
        }
        if self.rules.j5 {
            g.extend(ones(self.succ[y]).map(|z| 1u64 << z));
        }
        g.sort_unstable();
        g
    }

    fn allowed_targets(&self, x: usize) -> u64 {
        if self.rules.j4 {
            self.succ[x]
        } else {
            self.full()
        }
    }

    /// The least admissible `S_x`: forced parts only.
    fn default_conf(&self, x: usize) -> XConf {
        let mut c = vec![Vec::new(); self.n];
        for y in ones(self.succ[x]) {
            c[y] = if self.rules.gen {
                self.forced_gens(y)
            } else {
                let t = self.forced_targets(y);
                if t == 0 {
                    Vec::new()
                } else {
                    vec![t]
                }
            };
        }
        c
    }

    /// Families of generators for `(x, y)`: the forced ones plus at most
    /// [`GEN_EXTRA_GENERATORS`] admissible others, reduced and distinct.
    fn gen_families(&self, x: usize, y: usize) -> Vec<Vec<u64>> {
        let forced = self.forced_gens(y);
        let allowed = &self.allowed_gens[x];
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut push = |extra: &[u64]| {
            let mut fam: Vec<u64> = forced.iter().chain(extra).copied().collect();
            reduce_masks(&mut fam);
            if seen.insert(fam.clone()) {
                out.push(fam);
            }
        };
        push(&[]);
        for (i, &g) in allowed.iter().enumerate() {
            push(&[g]);
            if GEN_EXTRA_GENERATORS >= 2 {
                for &h in &allowed[i + 1..] {
                    push(&[g, h]);
                }
            }
        }
        out
    }

    /// Every admissible `S_x`, for coupled conditions or the unfactored
    /// search.
    fn listed(&mut self, x: usize) -> &[XConf] {
        if self.listed[x].is_none() {
            let l = self.enumerate(x);
            self.listed[x] = Some(l);
        }
        self.listed[x].as_deref().unwrap()
    }

    fn enumerate(&self, x: usize) -> Vec<XConf> {
        let rx = self.succ[x];
        let ys: Vec<usize> = ones(rx).collect();
        if !self.rules.gen && self.rules.coupled() {
            return self.transitive_confs(x, &ys);
        }
        // Per-argument options, then their product.
        let per_y: Vec<Vec<Vec<u64>>> = ys
            .iter()
            .map(|&y| {
                if self.rules.gen {
                    self.gen_families(x, y)
                } else {
                    let forced = self.forced_targets(y);
                    let free = self.allowed_targets(x) & !forced;
                    submasks(free).map(|s| if forced | s == 0 { Vec::new() } else { vec![forced | s] }).collect()
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut conf = vec![Vec::new(); self.n];
        product(&ys, &per_y, 0, &mut conf, &mut |c| {
            if !self.rules.gen || !self.rules.coupled() || gen_split_ok(self.rules, rx, c) {
                out.push(c.clone());
            }
        });
        out
    }

    /// Veltman `S_x` satisfying `J2`: transitive relations on `R[x]`
    /// containing the forced pairs.
    fn transitive_confs(&self, x: usize, ys: &[usize]) -> Vec<XConf> {
        let rx = self.succ[x];
        let mut out = Vec::new();
        let mut rows = vec![0u64; self.n];
        fn go(o: &Order, rx: u64, ys: &[usize], k: usize, rows: &mut Vec<u64>, out: &mut Vec<XConf>) {
            if k == ys.len() {
                out.push(rows.iter().map(|&r| if r == 0 { Vec::new() } else { vec![r] }).collect());
                return;
            }
            let y = ys[k];
            let forced = o.forced_targets(y);
            for s in submasks(rx & !forced) {
                let row = forced | s;
                // Compare with every row already fixed, in both directions.
                let ok = ys[..=k].iter().all(|&z| {
                    let rz = if z == y { row } else { rows[z] };
                    (row >> z & 1 == 0 || rz & !row == 0) && (rz >> y & 1 == 0 || row & !rz == 0)
                });
                if ok {
                    rows[y] = row;
                    go(o, rx, ys, k + 1, rows, out);
                    rows[y] = 0;
                }
            }
        }
        go(self, rx, ys, 0, &mut rows, &mut out);
        out
    }
}

/// Sub-masks of `m` in increasing order.
fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let bits: Vec<usize> = ones(m).collect();
    (0u64..1 << bits.len()).map(move |i| ones(i).fold(0, |acc, b| acc | 1 << bits[b]))
}

fn product(ys: &[usize], per_y: &[Vec<Vec<u64>>], k: usize, conf: &mut XConf, f: &mut impl FnMut(&XConf)) {
    if k == ys.len() {
        f(conf);
        return;
    }
    for option in &per_y[k] {
        conf[ys[k]] = option.clone();
        product(ys, per_y, k + 1, conf, f);
    }
    conf[ys[k]] = Vec::new();
}

/// Sorts, deduplicates and keeps only minimal masks.
fn reduce_masks(fam: &mut Vec<u64>) {
    fam.sort_unstable();
    fam.dedup();
    let all = fam.clone();
    fam.retain(|&g| !all.iter().any(|&h| h != g && h & !g == 0));
}

/// The generalized `J2` (and `J2+`) condition at `x`.
fn gen_split_ok(rules: &Rules, rx: u64, conf: &XConf) -> bool {
    fn unions(conf: &XConf, y: usize, members: u64, acc: u64) -> bool {
        if members == 0 {
            return conf[y].iter().any(|&g| g & !acc == 0);
        }
        let z = members.trailing_zeros() as usize;
        conf[z].iter().all(|&u| unions(conf, y, members & (members - 1), acc | u))
    }
    ones(rx).all(|y| {
        conf[y].iter().all(|&g| {
            (!rules.j2 || unions(conf, y, g & rx, 0))
                && (!rules.j2plus || submasks(g).all(|v0| unions(conf, y, v0 & rx, g & !v0)))
        })
    })
}

/// Profiles realizable at each world under one valuation, with a witness
/// `S_x` for each.
type Options = Vec<(u64, XConf)>;

struct Profiles<'o, 'a> {
    order: &'o mut Order<'a>,
    kmask: u64,
    /// Per world: which `▷`-subformulas have it in their left operand.
    avec: Vec<u64>,
    /// Per world: which have it in their right operand.
    bvec: Vec<u64>,
    cache: Vec<Option<Options>>,
}

impl Profiles<'_, '_> {
    fn get(&mut self, x: usize) -> &Options {
        if self.cache[x].is_none() {
            let o = self.compute(x);
            self.cache[x] = Some(o);
        }
        self.cache[x].as_ref().unwrap()
    }

    fn gmask(&self, g: u64) -> u64 {
        ones(g).fold(self.kmask, |acc, z| acc & self.bvec[z])
    }

    /// The right-operand hits of one argument's `S`-image.
    fn hits(&self, targets: &[u64]) -> u64 {
        if self.order.rules.gen {
            targets.iter().fold(0, |acc, &g| acc | self.gmask(g))
        } else {
            targets.iter().flat_map(|&m| ones(m)).fold(0, |acc, z| acc | self.bvec[z])
        }
    }

    fn compute(&mut self, x: usize) -> Options {
        let rx = self.order.succ[x];
        if rx == 0 {
            return vec![(self.kmask, vec![Vec::new(); self.order.n])];
        }
        if self.order.rules.coupled() {
            self.order.listed(x);
            let confs = self.order.listed[x].as_ref().unwrap();
            let mut out: Options = Vec::new();
            for c in confs {
                let p = ones(rx).fold(self.kmask, |p, y| p & (!self.avec[y] | self.hits(&c[y])));
                if !out.iter().any(|(q, _)| *q == p) {
                    out.push((p, c.clone()));
                }
            }
            return out;
        }
        // Factor over arguments: collect each y's realizable hit masks,
        // then fold.
        let mut acc: Options = vec![(self.kmask, vec![Vec::new(); self.order.n])];
        for y in ones(rx) {
            let per_y = self.argument_options(x, y);
            let mut next: Options = Vec::new();
            for (p, conf) in &acc {
                for (hit, targets) in &per_y {
                    let q = p & (!self.avec[y] | hit);
                    if !next.iter().any(|(r, _)| *r == q) {
                        let mut c = conf.clone();
                        c[y] = targets.clone();
                        next.push((q, c));
                    }
                }
            }
            acc = next;
        }
        acc
    }

    /// Distinct hit masks the `S_x`-image of `y` can have, each with the
    /// first image found realizing it.
    fn argument_options(&self, x: usize, y: usize) -> Vec<(u64, Vec<u64>)> {
        let o = &*self.order;
        let mut opts: Vec<(u64, Vec<u64>)>;
        if o.rules.gen {
            let forced = o.forced_gens(y);
            opts = vec![(self.hits(&forced), forced)];
            let mut distinct: Vec<(u64, u64)> = Vec::new();
            for &g in &o.allowed_gens[x] {
                let m = self.gmask(g);
                if !distinct.iter().any(|&(d, _)| d == m) {
                    distinct.push((m, g));
                }
            }
            for (m, g) in distinct {
                for i in 0..opts.len() {
                    let hit = opts[i].0 | m;
                    if !opts.iter().any(|(h, _)| *h == hit) {
                        let mut gens = opts[i].1.clone();
                        gens.push(g);
                        opts.push((hit, gens));
                    }
                }
            }
        } else {
            let forced = o.forced_targets(y);
            opts = vec![(self.hits(&[forced]), vec![forced])];
            for z in ones(o.allowed_targets(x) & !forced) {
                for i in 0..opts.len() {
                    let hit = opts[i].0 | self.bvec[z];
                    if !opts.iter().any(|(h, _)| *h == hit) {
                        opts.push((hit, vec![opts[i].1[0] | 1 << z]));
                    }
                }
            }
            for (_, t) in &mut opts {
                t.retain(|&m| m != 0);
            }
        }
        opts
    }
}

fn search_order(rules: &Rules, problem: &Problem, poset: &Poset) -> Option<Refutation> {
    let mut order = Order::new(rules, poset);
    let n = order.n;
    let nv = problem.vars.len();
    assert!(nv * n < 64, "{nv} variables over {n} worlds is too many valuations to enumerate");
    let world_mask = order.full();
    let mut buf = Vec::new();
    let mut vals = vec![BitSet::default(); problem.slots.len()];
    for code in 0u64..1 << (nv * n) {
        let real: Vec<u64> = (0..nv).map(|i| code >> (i * n) & world_mask).collect();
        for (v, slot) in vals.iter_mut().zip(&problem.slots) {
            *v = match *slot {
                Slot::Real(i) => BitSet::from_word(real[i]),
                Slot::Fresh(_) => BitSet::default(),
            };
        }
        let found = if problem.factored {
            factored_step(&mut order, problem, &real, &mut vals, &mut buf)
        } else {
            explicit_step(&mut order, problem, &real, &vals, &mut buf)
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

fn factored_step(
    order: &mut Order,
    problem: &Problem,
    real: &[u64],
    vals: &mut [BitSet],
    buf: &mut Vec<BitSet>,
) -> Option<Refutation> {
    let n = order.n;
    let k = problem.rhds;
    problem.program.run(&Bare(&order.sets), vals, buf);
    let (mut avec, mut bvec) = (vec![0u64; n], vec![0u64; n]);
    for i in 0..k {
        for y in problem.program.root_extension(1 + 2 * i, buf).iter() {
            avec[y] |= 1 << i;
        }
        for z in problem.program.root_extension(2 + 2 * i, buf).iter() {
            bvec[z] |= 1 << i;
        }
    }
    let kmask = if k == 0 { 0 } else { u64::MAX >> (64 - k) };
    let succ = order.succ.to_vec();
    let mut profiles = Profiles { order, kmask, avec, bvec, cache: vec![None; n] };
    for w in 0..n {
        let relevant: Vec<usize> =
            if problem.needs_cone { std::iter::once(w).chain(ones(succ[w])).collect() } else { vec![w] };
        let sizes: Vec<usize> = relevant.iter().map(|&x| profiles.get(x).len()).collect();
        let mut idx = vec![0usize; relevant.len()];
        loop {
            for (slot, v) in problem.slots.iter().zip(vals.iter_mut()) {
                if let Slot::Fresh(i) = *slot {
                    *v = relevant
                        .iter()
                        .zip(&idx)
                        .filter(|&(&x, &j)| profiles.cache[x].as_ref().unwrap()[j].0 >> i & 1 == 1)
                        .map(|(&x, _)| x)
                        .collect();
                }
            }
            problem.program.run(&Bare(&profiles.order.sets), vals, buf);
            if !problem.program.root_extension(0, buf).contains(w) {
                let mut confs: Vec<XConf> = (0..n).map(|x| profiles.order.default_conf(x)).collect();
                for (&x, &j) in relevant.iter().zip(&idx) {
                    confs[x] = profiles.cache[x].as_ref().unwrap()[j].1.clone();
                }
                return Some(build(profiles.order, &problem.vars, real, &confs, w));
            }
            if !advance(&mut idx, &sizes) {
                break;
            }
        }
    }
    None
}

/// Odometer step; false once every combination has been visited.
fn advance(idx: &mut [usize], sizes: &[usize]) -> bool {
    for (i, s) in idx.iter_mut().zip(sizes) {
        *i += 1;
        if *i < *s {
            return true;
        }
        *i = 0;
    }
    false
}

fn explicit_step(
    order: &mut Order,
    problem: &Problem,
    real: &[u64],
    vals: &[BitSet],
    buf: &mut Vec<BitSet>,
) -> Option<Refutation> {
    let n = order.n;
    let xs: Vec<usize> = (0..n).filter(|&x| order.succ[x] != 0).collect();
    for &x in &xs {
        order.listed(x);
    }
    let empty: XConf = vec![Vec::new(); n];
    let lists: Vec<&[XConf]> = xs.iter().map(|&x| order.listed[x].as_deref().unwrap()).collect();
    let sizes: Vec<usize> = lists.iter().map(|l| l.len()).collect();
    if sizes.contains(&0) {
        return None;
    }
    let mut idx = vec![0usize; xs.len()];
    loop {
        let mut confs: Vec<&XConf> = vec![&empty; n];
        for ((&x, list), &j) in xs.iter().zip(&lists).zip(&idx) {
            confs[x] = &list[j];
        }
        let s = Explicit { sets: &order.sets, gen: order.rules.gen, confs };
        problem.program.run(&s, vals, buf);
        let ext = problem.program.root_extension(0, buf);
        if let Some(w) = (0..n).find(|&w| !ext.contains(w)) {
            let owned: Vec<XConf> = s.confs.iter().map(|c| (*c).clone()).collect();
            return Some(build(order, &problem.vars, real, &owned, w));
        }
        if !advance(&mut idx, &sizes) {
            return None;
        }
    }
}

fn build(order: &Order, vars: &[String], real: &[u64], confs: &[XConf], world: usize) -> Refutation {
    let n = order.n;
    let valuation: Valuation = vars.iter().cloned().zip(real.iter().map(|&m| BitSet::from_word(m))).collect();
    let r = order.sets.clone();
    let model = if order.rules.gen {
        let gens = confs
            .iter()
            .map(|c| {
                c.iter()
                    .map(|gs| {
                        let mut v: Vec<BitSet> = gs.iter().map(|&g| BitSet::from_word(g)).collect();
                        reduce_to_antichain(&mut v);
                        v
                    })
                    .collect()
            })
            .collect();
        Countermodel::Generalized(GenModel { frame: GenFrame::from_parts(r, gens), valuation })
    } else {
        let s = confs
            .iter()
            .map(|c| (0..n).map(|y| BitSet::from_word(c[y].iter().fold(0, |a, &m| a | m))).collect())
            .collect();
        Countermodel::Veltman(VeltmanModel { frame: VeltmanFrame::from_parts(r, s), valuation })
    };
    Refutation { model, world }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn logic(name: &str) -> Logic {
        Logic::by_name(name).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn two_world_refutation_of_reflexivity() {
        let r = bounded_refute(&logic("IL-"), &f("p |> p"), 2).expect("refutable");
        let Countermodel::Veltman(m) = &r.model else { panic!("Veltman model expected") };
        assert_eq!(r.world, 0);
        assert_eq!(m.frame.len(), 2);
        assert_eq!(m.frame.skeleton().pairs().collect::<Vec<_>>(), [(0, 1)]);
        assert_eq!(m.frame.s_triples().count(), 0);
        assert_eq!(m.valuation["p"], BitSet::singleton(1));
    }

    #[test]
    fn j1_logics_have_no_small_refutation_of_reflexivity() {
        assert!(bounded_refute(&logic("IL-(J1)"), &f("p |> p"), 5).is_none());
        assert!(bounded_refute(&logic("IL"), &f("p |> p"), 4).is_none());
    }

    #[test]
    fn j5_instance_needs_three_worlds() {
        let l = logic("IL-");
        assert!(bounded_refute(&l, &f("<>p |> p"), 2).is_none());
        let r = bounded_refute(&l, &f("<>p |> p"), 3).unwrap();
        assert_eq!(r.model.len(), 3);
        assert!(bounded_refute(&logic("IL-(J5)"), &f("<>p |> p"), 4).is_none());
    }

    #[test]
    fn generalized_refutations_of_the_plus_principles() {
        let j2plus = Principle::J2Plus.characteristic_instance();
        let r = bounded_refute(&logic("IL-(J2,J4+,J5)"), &j2plus, 4).expect("refutable in four worlds");
        assert!(matches!(r.model, Countermodel::Generalized(_)));
        let j4plus = Principle::J4Plus.characteristic_instance();
        let r = bounded_refute(&logic("IL-(J1,J4,J5)"), &j4plus, 4).expect("refutable in four worlds");
        assert!(r.model.len() <= 4);
        // A generator reaching outside R[x] needs only two worlds.
        let r = bounded_refute(&logic("IL-(J2)"), &j4plus, 3).expect("refutable in two worlds");
        assert_eq!(r.model.len(), 2);
    }

    #[test]
    fn theorems_are_never_refuted() {
        for (l, a) in [
            ("IL", "(p |> (q | r)) & (q |> r) -> p |> r"),
            ("CL", "p |> q -> (<>p -> <>q)"),
            ("IL-(J2+)", "[](q -> r) -> (p |> q -> p |> r)"),
        ] {
            assert!(bounded_refute(&logic(l), &f(a), 3).is_none(), "{l} ⊢ {a}");
        }
    }

    #[test]
    fn nested_interpretability_uses_the_explicit_search() {
        let a = f("(p |> q) |> (p |> q)");
        assert!(!Problem::new(&a).factored);
        assert!(bounded_refute(&logic("IL-(J1)"), &a, 3).is_none());
        let r = bounded_refute(&logic("IL-"), &a, 3).expect("refutable");
        assert_eq!(r.model.len(), 2);
    }

    #[test]
    fn rhd_under_box_looks_at_successors() {
        let a = f("[](p |> p)");
        assert!(Problem::new(&a).needs_cone);
        let r = bounded_refute(&logic("IL-"), &a, 3).unwrap();
        assert_eq!(r.model.len(), 3);
        assert!(bounded_refute(&logic("IL-(J1)"), &a, 3).is_none());
    }

    #[test]
    fn searches_are_monotone_in_the_budget() {
        let a = f("<>p |> p");
        let small = bounded_refute(&logic("IL-"), &a, 3).unwrap();
        let large = bounded_refute(&logic("IL-"), &a, 4).unwrap();
        assert_eq!(small.model, large.model);
    }

    #[test]
    fn veltman_logics_can_be_searched_over_generalized_frames() {
        let opts = SearchOptions { max_worlds: 2, class: FrameClass::Generalized };
        let r = bounded_refute_with(&logic("IL-"), &f("p |> p"), opts).unwrap();
        assert!(matches!(r.model, Countermodel::Generalized(_)));
    }
}
