//! Compact sets of small non-negative integers.
//!
//! Worlds of a finite frame and members of a maximal consistent set are both
//! addressed by dense indices, and almost every semantic operation is a
//! handful of word-wise boolean operations over such sets.

use smallvec::SmallVec;
use std::fmt;

const BITS: usize = 64;

/// A growable bit set, stored inline for up to 128 elements.
///
/// Equality, hashing and ordering ignore capacity: two sets with the same
/// elements compare equal however they were built.
#[derive(Clone, Default)]
pub struct BitSet {
    words: SmallVec<[u64; 2]>,
}

impl BitSet {
    fn trimmed(&self) -> &[u64] {
        let n = self.words.iter().rposition(|&w| w != 0).map_or(0, |i| i + 1);
        &self.words[..n]
    }
}

impl PartialEq for BitSet {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for BitSet {}

impl std::hash::Hash for BitSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state)
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitSet {
    /// Orders by the elements read as a binary number, most significant
    /// element first; `{}` is least.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b) = (self.trimmed(), other.trimmed());
        a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
    }
}

impl BitSet {
    /// The empty set with room for `capacity` elements.
    pub fn with_capacity(capacity: usize) -> Self {
        let n = capacity.div_ceil(BITS);
        BitSet { words: SmallVec::from_elem(0, n) }
    }

    /// The set `{0, .., len - 1}`.
    pub fn full(len: usize) -> Self {
        let mut s = BitSet::with_capacity(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = BitSet::default();
        s.insert(i);
        s
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / BITS, i % BITS);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let (w, b) = (i / BITS, i % BITS);
        match self.words.get_mut(w) {
            Some(word) if *word & (1 << b) != 0 => {
                *word &= !(1 << b);
                true
            }
            _ => false,
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / BITS).is_some_and(|w| w & (1 << (i % BITS)) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, word: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    /// The smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().enumerate().all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(other.words.iter()).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (i, a) in self.words.iter_mut().enumerate() {
            *a &= other.words.get(i).copied().unwrap_or(0);
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// `{0, .., len - 1} \ self`.
    pub fn complement(&self, len: usize) -> BitSet {
        BitSet::full(len).difference(self)
    }

    /// The low 64 elements as a machine word.
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn from_word(w: u64) -> Self {
        let mut words = SmallVec::new();
        words.push(w);
        BitSet { words }
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = BitSet::default();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.word * BITS + b);
            }
            self.word += 1;
            self.cur = *self.words.get(self.word)?;
        }
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_several_words() {
        let s: BitSet = [0, 63, 64, 200].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 200]);
        assert_eq!(s.len(), 4);
        assert!(s.contains(200) && !s.contains(199));
    }

    #[test]
    fn equality_ignores_capacity() {
        let mut a = BitSet::with_capacity(300);
        a.insert(3);
        assert_eq!(a, BitSet::singleton(3));
        assert!(BitSet::singleton(70) > BitSet::singleton(3));
        assert!(BitSet::with_capacity(200) < BitSet::singleton(0));
    }

    #[test]
    fn subset_and_difference() {
        let a: BitSet = [1, 2].into_iter().collect();
        let b: BitSet = [1, 2, 70].into_iter().collect();
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(b.difference(&a).iter().collect::<Vec<_>>(), vec![70]);
        assert_eq!(a.complement(4).iter().collect::<Vec<_>>(), vec![0, 3]);
    }
}
