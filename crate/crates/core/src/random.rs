//! Seeded random frames, models and formulas for fuzzing and sampling.
//!
//! Frames can be *closed* under a logic's frame conditions: the smallest
//! additions (and, for `J4`/`J4+`, removals) that make every condition
//! hold, so that sampling frames of a logic needs no rejection loop.

use crate::bitset::BitSet;
use crate::genveltman::{reduce_to_antichain, GenFrame, GenModel};
use crate::kernel::{Logic, Principle};
use crate::semantics::Valuation;
use crate::syntax::Formula;
use crate::veltman::{VeltmanFrame, VeltmanModel};
use rand::Rng;

/// A random strict order on `0..n` with every `i R j` having `i < j`.
pub fn random_order<R: Rng>(rng: &mut R, n: usize) -> Vec<BitSet> {
    let mut r = vec![BitSet::default(); n];
    for x in (0..n).rev() {
        for y in x + 1..n {
            if !r[x].contains(y) && rng.gen_bool(0.5) {
                r[x].insert(y);
                let ry = r[y].clone();
                r[x].union_with(&ry);
            }
        }
    }
    r
}

fn random_subset<R: Rng>(rng: &mut R, pool: u64) -> BitSet {
    BitSet::from_word(rng.gen::<u64>() & pool)
}

/// A random Veltman frame on `n ≤ 64` worlds; `S_x` targets are mostly
/// `R`-successors of `x`.
pub fn random_veltman_frame<R: Rng>(rng: &mut R, n: usize) -> VeltmanFrame {
    let r = random_order(rng, n);
    let all = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let s = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if !r[x].contains(y) {
                        return BitSet::default();
                    }
                    let pool = if rng.gen_bool(0.7) { r[x].low_word() } else { all };
                    random_subset(rng, pool)
                })
                .collect()
        })
        .collect();
    VeltmanFrame::from_parts(r, s)
}

/// A random generalized frame on `n ≤ 64` worlds with up to two
/// generators per `R`-pair, mostly inside `R[x]`.
pub fn random_gen_frame<R: Rng>(rng: &mut R, n: usize) -> GenFrame {
    let r = random_order(rng, n);
    let all = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let gens = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if !r[x].contains(y) {
                        return Vec::new();
                    }
                    let k = rng.gen_range(0..=2);
                    let mut g: Vec<BitSet> = (0..k)
                        .map(|_| {
                            let pool = if rng.gen_bool(0.7) { r[x].low_word() } else { all };
                            random_subset(rng, pool)
                        })
                        .filter(|v| !v.is_empty())
                        .collect();
                    reduce_to_antichain(&mut g);
                    g
                })
                .collect()
        })
        .collect();
    GenFrame::from_parts(r, gens)
}

/// The least frame containing `frame`'s `S` (restricted to `R[x]` when
/// the logic has `J4`) that meets the Veltman condition of every
/// principle of `logic`.
pub fn close_veltman(frame: &VeltmanFrame, logic: &Logic) -> VeltmanFrame {
    let ps = logic.principles();
    let sk = frame.skeleton();
    let n = frame.len();
    let r: Vec<BitSet> = (0..n).map(|x| sk.successors(x).clone()).collect();
    let mut s: Vec<Vec<BitSet>> = (0..n).map(|x| (0..n).map(|y| frame.s_successors(x, y).clone()).collect()).collect();
    for x in 0..n {
        for y in r[x].iter() {
            let row = &mut s[x][y];
            if ps.contains(&Principle::J4) {
                row.intersect_with(&r[x]);
            }
            if ps.contains(&Principle::J1) {
                row.insert(y);
            }
            if ps.contains(&Principle::J5) {
                row.union_with(&r[y]);
            }
        }
        if ps.contains(&Principle::J2) {
            // Transitive closure of S_x, which stays inside R[x].
            loop {
                let mut changed = false;
                for y in r[x].iter() {
                    let via: BitSet = s[x][y]
                        .iter()
                        .filter(|&z| r[x].contains(z))
                        .fold(BitSet::default(), |acc, z| acc.union(&s[x][z]));
                    if !via.is_subset(&s[x][y]) {
                        s[x][y].union_with(&via);
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }
    VeltmanFrame::from_parts(r, s)
}

/// Unions `extra ∪ U₁ ∪ …` for each choice of `Uᵢ ∈ options[i]`.
fn unions(options: &[&[BitSet]], extra: &BitSet, out: &mut Vec<BitSet>) {
    match options.split_first() {
        None => out.push(extra.clone()),
        Some((first, rest)) => first.iter().for_each(|u| unions(rest, &extra.union(u), out)),
    }
}

/// The least upward-closed extension of `frame`'s `S` (after dropping or
/// trimming generators outside `R[x]` under `J4` or `J4+`) meeting the
/// generalized condition of every principle of `logic`.
pub fn close_gen(frame: &GenFrame, logic: &Logic) -> GenFrame {
    let ps = logic.principles();
    let sk = frame.skeleton();
    let n = frame.len();
    let r: Vec<BitSet> = (0..n).map(|x| sk.successors(x).clone()).collect();
    let mut gens: Vec<Vec<Vec<BitSet>>> =
        (0..n).map(|x| (0..n).map(|y| frame.generators(x, y).to_vec()).collect()).collect();
    let reaches = |g: &[BitSet], v: &BitSet| g.iter().any(|u| u.is_subset(v));
    for x in 0..n {
        for y in r[x].iter() {
            let g = &mut gens[x][y];
            if ps.contains(&Principle::J4Plus) {
                g.iter_mut().for_each(|v| v.intersect_with(&r[x]));
                g.retain(|v| !v.is_empty());
            } else if ps.contains(&Principle::J4) {
                g.retain(|v| v.intersects(&r[x]));
            }
            if ps.contains(&Principle::J1) {
                g.push(BitSet::singleton(y));
            }
            if ps.contains(&Principle::J5) {
                g.extend(r[y].iter().map(BitSet::singleton));
            }
            reduce_to_antichain(g);
        }
        if !ps.contains(&Principle::J2) {
            continue;
        }
        let plus = ps.contains(&Principle::J2Plus);
        loop {
            let mut added = Vec::new();
            for y in r[x].iter() {
                for v in &gens[x][y] {
                    let members: Vec<usize> = v.iter().collect();
                    // Under J2+ every split V₀ ∪ V₁ counts; under J2 only V₀ = V.
                    let splits: Vec<u32> =
                        if plus { (0..1 << members.len()).collect() } else { vec![(1 << members.len()) - 1] };
                    for mask in splits {
                        let v0: BitSet =
                            members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &z)| z).collect();
                        let v1 = v.difference(&v0);
                        let options: Vec<&[BitSet]> =
                            v0.intersection(&r[x]).iter().map(|z| gens[x][z].as_slice()).collect();
                        let mut us = Vec::new();
                        unions(&options, &v1, &mut us);
                        added.extend(us.into_iter().filter(|u| !reaches(&gens[x][y], u)).map(|u| (y, u)));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            for (y, u) in added {
                gens[x][y].push(u);
                reduce_to_antichain(&mut gens[x][y]);
            }
        }
    }
    GenFrame::from_parts(r, gens)
}

/// Each variable true at each world with probability one half.
pub fn random_valuation<R: Rng>(rng: &mut R, n: usize, vars: &[&str]) -> Valuation {
    let all = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    vars.iter().map(|v| (v.to_string(), random_subset(rng, all))).collect()
}

pub fn random_veltman_model<R: Rng>(rng: &mut R, n: usize, vars: &[&str]) -> VeltmanModel {
    let frame = random_veltman_frame(rng, n);
    let valuation = random_valuation(rng, n, vars);
    VeltmanModel { frame, valuation }
}

pub fn random_gen_model<R: Rng>(rng: &mut R, n: usize, vars: &[&str]) -> GenModel {
    let frame = random_gen_frame(rng, n);
    let valuation = random_valuation(rng, n, vars);
    GenModel { frame, valuation }
}

/// A random formula over `vars` of depth at most `depth`, using every
/// connective.
pub fn random_formula<R: Rng>(rng: &mut R, vars: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..vars.len() + 2) {
            0 => Formula::Bot,
            1 => Formula::Top,
            i => Formula::var(vars[i - 2]),
        };
    }
    let op = rng.gen_range(0..6);
    let a = random_formula(rng, vars, depth - 1);
    if op < 2 {
        return if op == 0 { Formula::not(a) } else { Formula::boxed(a) };
    }
    let b = random_formula(rng, vars, depth - 1);
    match op {
        2 => Formula::and(a, b),
        3 => Formula::or(a, b),
        4 => Formula::imp(a, b),
        _ => Formula::rhd(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::FrameConditions;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closures_meet_the_conditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for logic in Logic::registry() {
            for _ in 0..60 {
                let n = rng.gen_range(1..=4);
                let v = close_veltman(&random_veltman_frame(&mut rng, n), &logic);
                assert!(v.is_frame_for(&logic), "{logic}: {}", v.to_json());
                let g = close_gen(&random_gen_frame(&mut rng, n), &logic);
                assert!(g.is_frame_for(&logic), "{logic}: {}", g.to_json());
            }
        }
    }

    #[test]
    fn closing_a_frame_of_the_logic_changes_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let logic = Logic::by_name("IL").unwrap();
        let v = close_veltman(&random_veltman_frame(&mut rng, 4), &logic);
        assert_eq!(close_veltman(&v, &logic), v);
        let g = close_gen(&random_gen_frame(&mut rng, 4), &logic);
        assert_eq!(close_gen(&g, &logic), g);
    }

    #[test]
    fn formulas_respect_the_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            assert!(random_formula(&mut rng, &["p", "q"], 4).depth() <= 4);
        }
    }
}
