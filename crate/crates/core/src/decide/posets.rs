//! Finite strict partial orders up to isomorphism.
//!
//! Orders on `n` points are generated with a natural labeling (every
//! `i R j` has `i < j`) by adding one new maximal point at a time above a
//! down-closed set, then reduced to one representative per isomorphism
//! class: the labeling whose pair code is least. Representatives are
//! listed by increasing code and cached per size.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

/// A strict partial order on `0..n` with `i R j ⇒ i < j`, as successor
/// masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    succ: Vec<u64>,
}

impl Poset {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    /// `R[x]` as a bit mask.
    pub fn successors(&self, x: usize) -> u64 {
        self.succ[x]
    }

    pub fn successor_masks(&self) -> &[u64] {
        &self.succ
    }

    /// Whether some point lies below every other point.
    pub fn is_rooted(&self) -> bool {
        let n = self.len();
        n > 0 && self.succ[0].count_ones() as usize == n - 1
    }
}

/// Bit position of the pair `(i, j)`, `i < j`, in the pair code; pairs are
/// ordered lexicographically.
fn pair_bit(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// The pair code of `succ` relabeled by `pos` (old point ↦ new label).
fn code(succ: &[u64], pos: &[usize]) -> u64 {
    let n = succ.len();
    let mut c = 0;
    for (i, &s) in succ.iter().enumerate() {
        for j in ones(s) {
            c |= 1 << pair_bit(n, pos[i], pos[j]);
        }
    }
    c
}

/// The set bits of a mask, least first.
pub(crate) fn ones(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

/// Least pair code over all topological relabelings.
fn canonical_code(succ: &[u64]) -> u64 {
    let n = succ.len();
    let mut pred = vec![0u64; n];
    for (i, &s) in succ.iter().enumerate() {
        for j in ones(s) {
            pred[j] |= 1 << i;
        }
    }
    let mut best = u64::MAX;
    let mut pos = vec![0; n];
    fn go(succ: &[u64], pred: &[u64], placed: u64, k: usize, pos: &mut [usize], best: &mut u64) {
        let n = succ.len();
        if k == n {
            *best = (*best).min(code(succ, pos));
            return;
        }
        for x in 0..n {
            if placed >> x & 1 == 0 && pred[x] & !placed == 0 {
                pos[x] = k;
                go(succ, pred, placed | 1 << x, k + 1, pos, best);
            }
        }
    }
    go(succ, &pred, 0, 0, &mut pos, &mut best);
    best
}

fn decode(n: usize, c: u64) -> Poset {
    let mut succ = vec![0u64; n];
    for (i, s) in succ.iter_mut().enumerate() {
        for j in i + 1..n {
            if c >> pair_bit(n, i, j) & 1 == 1 {
                *s |= 1 << j;
            }
        }
    }
    Poset { succ }
}

fn generate(n: usize) -> Vec<Poset> {
    // Naturally labeled orders, grown one maximal point at a time.
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for succ in &layer {
            for below in 0u64..1 << k {
                let closed = ones(below).all(|i| (0..k).all(|j| succ[j] >> i & 1 == 0 || below >> j & 1 == 1));
                if !closed {
                    continue;
                }
                let mut s = succ.clone();
                for i in ones(below) {
                    s[i] |= 1 << k;
                }
                s.push(0);
                next.push(s);
            }
        }
        layer = next;
    }
    let codes: BTreeMap<u64, ()> = layer.iter().map(|s| (canonical_code(s), ())).collect();
    codes.keys().map(|&c| decode(n, c)).collect()
}

/// Largest size for which orders are enumerated.
pub const MAX_POSET_SIZE: usize = 6;

/// One representative of every isomorphism class of strict partial orders
/// on `n` points, in increasing canonical code.
///
/// # Panics
///
/// If `n > MAX_POSET_SIZE`.
pub fn posets(n: usize) -> Arc<Vec<Poset>> {
    assert!(n <= MAX_POSET_SIZE, "orders are enumerated up to {MAX_POSET_SIZE} points, not {n}");
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<Vec<Poset>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(generate(n));
    cache.lock().unwrap().insert(n, p.clone());
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_the_known_sequence() {
        let counts: Vec<usize> = (0..=5).map(|n| posets(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn rooted_orders_are_orders_on_one_point_fewer() {
        for n in 1..=5 {
            let rooted = posets(n).iter().filter(|p| p.is_rooted()).count();
            assert_eq!(rooted, posets(n - 1).len(), "n = {n}");
        }
    }

    #[test]
    fn representatives_are_transitive_and_naturally_labeled() {
        for p in posets(5).iter() {
            for x in 0..5 {
                let s = p.successors(x);
                assert_eq!(s & ((1 << (x + 1)) - 1), 0);
                for y in ones(s) {
                    assert_eq!(p.successors(y) & !s, 0);
                }
            }
        }
    }

    #[test]
    fn two_points_give_antichain_then_chain() {
        let p = posets(2);
        assert_eq!(p[0].successor_masks(), [0, 0]);
        assert_eq!(p[1].successor_masks(), [0b10, 0]);
    }
}
