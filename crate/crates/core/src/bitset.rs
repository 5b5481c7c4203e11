//! Dense bit-vectors over vertex ids and the popcount kernels built on them.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[inline]
pub const fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// `|a & b|` over two equally long word slices.
#[inline]
pub fn and_count(a: &[u64], b: &[u64]) -> u32 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

#[inline]
pub fn and3_count(a: &[u64], b: &[u64], c: &[u64]) -> u32 {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| (x & y & z).count_ones())
        .sum()
}

/// Iterates over the positions of the set bits, ascending.
pub fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + tz)
            }
        })
    })
}

/// A subset of `0..universe` stored as a dense bit-vector with a cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; words_for(universe)],
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut words = vec![u64::MAX; words_for(universe)];
        mask_tail(&mut words, universe);
        VertexSet {
            universe,
            words,
            len: universe,
        }
    }

    pub fn from_ids<I>(universe: usize, ids: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: TryInto<usize>,
    {
        let mut set = VertexSet::new(universe);
        for id in ids {
            let v = id
                .try_into()
                .map_err(|_| Error::param("vertex id does not fit in usize"))?;
            if v >= universe {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: universe,
                });
            }
            set.insert(v);
        }
        Ok(set)
    }

    /// Builds a set from raw words; bits at or beyond `universe` are cleared.
    pub fn from_words(universe: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(universe), 0);
        mask_tail(&mut words, universe);
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        VertexSet {
            universe,
            words,
            len,
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns `true` if `v` was newly inserted. Panics if `v` is out of range.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(
            v < self.universe,
            "vertex {v} outside universe {}",
            self.universe
        );
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        if *w & bit == 0 {
            *w |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        if *w & bit != 0 {
            *w &= !bit;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_ones(&self.words)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().map(|v| v as u32).collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn zip_with(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        assert_eq!(
            self.universe, other.universe,
            "vertex sets over different universes"
        );
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        VertexSet::from_words(self.universe, words)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        assert_eq!(self.universe, other.universe);
        and_count(&self.words, &other.words) as usize
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection_len(other) == 0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }
}

fn mask_tail(words: &mut [u64], universe: usize) {
    let rem = universe % 64;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serialized as a sorted id array; the universe is carried by the surrounding graph.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|v| v as u64))
    }
}

/// Deserialized sets get the smallest universe that holds every id; callers
/// that need a specific universe re-home them with [`VertexSet::from_ids`].
impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ids = Vec::<u64>::deserialize(d)?;
        let universe = ids.iter().max().map_or(0, |m| *m as usize + 1);
        VertexSet::from_ids(universe, ids).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cached_len_tracks_popcount() {
        let mut s = VertexSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert_eq!(s.len(), 2);
        assert!(s.remove(0));
        assert!(!s.remove(0));
        assert_eq!(s.len(), 1);
        assert_eq!(s.to_vec(), vec![129]);
    }

    #[test]
    fn full_set_masks_tail_bits() {
        let s = VertexSet::full(70);
        assert_eq!(s.len(), 70);
        assert_eq!(s.words()[1].count_ones(), 6);
        assert!(!s.contains(70));
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_ids(10, [1, 2, 3]).unwrap();
        let b = VertexSet::from_ids(10, [3, 4]).unwrap();
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 2]);
        assert!(!a.is_disjoint(&b));
        assert!(VertexSet::from_ids(10, [1, 3]).unwrap().is_subset(&a));
    }

    #[test]
    fn out_of_range_id_rejected() {
        assert!(matches!(
            VertexSet::from_ids(4, [4]),
            Err(Error::VertexOutOfRange { vertex: 4, n: 4 })
        ));
    }
}
