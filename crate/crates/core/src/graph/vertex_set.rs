use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Result};

/// A subset of the vertices `0..universe` of some graph, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
    size: usize,
}

#[inline]
pub(crate) fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        Self { universe, words: vec![0; word_count(universe)], size: 0 }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    pub fn from_indices<I>(universe: usize, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::empty(universe);
        for v in indices {
            if v >= universe {
                return Err(domain(format!("vertex {v} out of range for n = {universe}")));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Builds a set from the low `universe` bits of `mask`; `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= 64);
        let mask = if universe == 64 { mask } else { mask & ((1u64 << universe) - 1) };
        let mut words = vec![0; word_count(universe)];
        if let Some(w) = words.first_mut() {
            *w = mask;
        }
        Self { universe, words, size: mask.count_ones() as usize }
    }

    /// The set as a single word. Only meaningful when `universe <= 64`.
    pub fn to_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns true if `v` was newly added.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} out of range for n = {}", self.universe);
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        if *w & bit == 0 {
            *w |= bit;
            self.size += 1;
            true
        } else {
            false
        }
    }

    /// Returns true if `v` was present.
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        if *w & bit != 0 {
            *w &= !bit;
            self.size -= 1;
            true
        } else {
            false
        }
    }

    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.universe % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Self { universe: self.universe, words, size: self.universe - self.size }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.universe == other.universe
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

/// Orders by size first, then by the sorted member lists lexicographically.
/// This is the tie-break order used for reported witnesses.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct VertexSetRepr {
    n: usize,
    members: Vec<usize>,
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VertexSetRepr { n: self.universe, members: self.to_vec() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = VertexSetRepr::deserialize(deserializer)?;
        VertexSet::from_indices(repr.n, repr.members).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_tracks_population() {
        let mut s = VertexSet::empty(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert_eq!(s.len(), 2);
        assert!(s.remove(0));
        assert_eq!(s.len(), 1);
        assert_eq!(s.to_vec(), vec![129]);
    }

    #[test]
    fn complement_stays_in_universe() {
        let s = VertexSet::from_indices(70, [1, 65]).unwrap();
        let c = s.complement();
        assert_eq!(c.len(), 68);
        assert!(!c.contains(1) && !c.contains(65) && c.contains(69));
        assert!(c.iter().all(|v| v < 70));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(VertexSet::from_indices(3, [3]).is_err());
    }

    #[test]
    fn order_is_size_then_lex() {
        let a = VertexSet::from_indices(6, [5]).unwrap();
        let b = VertexSet::from_indices(6, [0, 3]).unwrap();
        let c = VertexSet::from_indices(6, [1, 2]).unwrap();
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn mask_round_trip() {
        let s = VertexSet::from_mask(10, 0b1010_0001);
        assert_eq!(s.to_vec(), vec![0, 5, 7]);
        assert_eq!(s.to_mask(), 0b1010_0001);
    }
}
