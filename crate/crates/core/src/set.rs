//! Subsets of a finite group as bit-sets over element indices.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest group order representable by an [`ElementSet`].
pub const MAX_ORDER: usize = 128;

/// A subset of group elements, stored as a bit-set over indices `0..n`.
///
/// The set does not carry its group; operations that need the order
/// (complement, full set) take it explicitly. Serialized as a sorted list
/// of element indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u128);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    #[inline]
    pub const fn from_bits(bits: u128) -> Self {
        ElementSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u128 {
        self.0
    }

    /// All elements `0..n`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ORDER);
        if n == MAX_ORDER {
            ElementSet(u128::MAX)
        } else {
            ElementSet((1u128 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(g: usize) -> Self {
        ElementSet(1u128 << g)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = ElementSet::EMPTY;
        for g in it {
            s.insert(g);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, g: usize) {
        self.0 |= 1u128 << g;
    }

    #[inline]
    pub fn remove(&mut self, g: usize) {
        self.0 &= !(1u128 << g);
    }

    #[inline]
    pub fn with(self, g: usize) -> Self {
        ElementSet(self.0 | (1u128 << g))
    }

    #[inline]
    pub fn without(self, g: usize) -> Self {
        ElementSet(self.0 & !(1u128 << g))
    }

    #[inline]
    pub fn contains(self, g: usize) -> bool {
        g < MAX_ORDER && (self.0 >> g) & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    /// Complement inside a group of order `n`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        ElementSet(!self.0 & ElementSet::full(n).0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Largest index in the set plus one (0 for the empty set).
    pub fn upper_bound(self) -> usize {
        128 - self.0.leading_zeros() as usize
    }

    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    #[inline]
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Ascending iterator over the indices of an [`ElementSet`].
#[derive(Clone)]
pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let g = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for ElementSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        ElementSet::from_indices(it)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&g| g >= MAX_ORDER) {
            return Err(serde::de::Error::custom(format!(
                "element index {bad} out of range"
            )));
        }
        Ok(ElementSet::from_indices(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = ElementSet::from_indices([1, 3, 5]);
        let b = ElementSet::from_indices([3, 4]);
        assert_eq!(a.union(b).to_vec(), vec![1, 3, 4, 5]);
        assert_eq!(a.intersection(b).to_vec(), vec![3]);
        assert_eq!(a.difference(b).to_vec(), vec![1, 5]);
        assert_eq!(a.complement(6).to_vec(), vec![0, 2, 4]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.upper_bound(), 6);
        assert!(ElementSet::from_indices([3]).is_subset(a));
    }

    #[test]
    fn full_at_capacity() {
        assert_eq!(ElementSet::full(MAX_ORDER).len(), MAX_ORDER);
        assert_eq!(ElementSet::full(0), ElementSet::EMPTY);
        assert!(ElementSet::full(128).contains(127));
    }

    #[test]
    fn json_is_index_list() {
        let a = ElementSet::from_indices([0, 7, 100]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[0,7,100]");
        let back: ElementSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<ElementSet>("[200]").is_err());
    }
}
