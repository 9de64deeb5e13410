//! Dense node index sets and deterministic families of them.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense node index, assigned at ingestion in input order.
pub type NodeId = usize;

const WORD_BITS: usize = 64;

/// A set of [`NodeId`]s backed by a growable bit vector.
///
/// Trailing zero words are never stored, so derived equality and hashing are
/// extensional regardless of how the set was built.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct NodeIdSet {
    words: Vec<u64>,
}

impl NodeIdSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The set `{0, 1, ..., n - 1}`.
    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n / WORD_BITS];
        if !n.is_multiple_of(WORD_BITS) {
            words.push((1u64 << (n % WORD_BITS)) - 1);
        }
        Self { words }
    }

    pub fn singleton(node: NodeId) -> Self {
        let mut set = Self::new();
        set.insert(node);
        set
    }

    /// Inserts `node`; returns `true` if it was not present before.
    pub fn insert(&mut self, node: NodeId) -> bool {
        let (word, bit) = (node / WORD_BITS, node % WORD_BITS);
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        let mask = 1u64 << bit;
        let fresh = self.words[word] & mask == 0;
        self.words[word] |= mask;
        fresh
    }

    /// Removes `node`; returns `true` if it was present.
    pub fn remove(&mut self, node: NodeId) -> bool {
        let (word, bit) = (node / WORD_BITS, node % WORD_BITS);
        if word >= self.words.len() {
            return false;
        }
        let mask = 1u64 << bit;
        let present = self.words[word] & mask != 0;
        self.words[word] &= !mask;
        self.trim();
        present
    }

    #[inline]
    pub fn contains(&self, node: NodeId) -> bool {
        let (word, bit) = (node / WORD_BITS, node % WORD_BITS);
        self.words.get(word).is_some_and(|w| w & (1u64 << bit) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<NodeId> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn union_with(&mut self, other: &NodeIdSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &NodeIdSet) {
        self.words.truncate(other.words.len());
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.trim();
    }

    pub fn difference_with(&mut self, other: &NodeIdSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.trim();
    }

    pub fn union(&self, other: &NodeIdSet) -> NodeIdSet {
        let mut result = self.clone();
        result.union_with(other);
        result
    }

    pub fn intersection(&self, other: &NodeIdSet) -> NodeIdSet {
        let mut result = self.clone();
        result.intersect_with(other);
        result
    }

    pub fn difference(&self, other: &NodeIdSet) -> NodeIdSet {
        let mut result = self.clone();
        result.difference_with(other);
        result
    }

    /// Number of members shared with `other`, without allocating.
    pub fn intersection_len(&self, other: &NodeIdSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &NodeIdSet) -> bool {
        self.words.len() <= other.words.len()
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &NodeIdSet) -> bool {
        other.is_subset(self)
    }

    pub fn is_proper_subset(&self, other: &NodeIdSet) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn is_disjoint(&self, other: &NodeIdSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// `true` iff `self ∩ other ⊆ allowed`, computed without allocating.
    pub fn intersection_within(&self, other: &NodeIdSet, allowed: &NodeIdSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .all(|(i, (a, b))| a & b & !allowed.words.get(i).copied().unwrap_or(0) == 0)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = NodeId;

    #[inline]
    fn next(&mut self) -> Option<NodeId> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a NodeIdSet {
    type Item = NodeId;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<NodeId> for NodeIdSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut set = NodeIdSet::new();
        set.extend(iter);
        set
    }
}

impl Extend<NodeId> for NodeIdSet {
    fn extend<I: IntoIterator<Item = NodeId>>(&mut self, iter: I) {
        for node in iter {
            self.insert(node);
        }
    }
}

/// Lexicographic by sorted member list, so `{0} < {0, 1} < {1}`.
impl Ord for NodeIdSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for NodeIdSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NodeIdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for NodeIdSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for NodeIdSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<NodeId>::deserialize(deserializer).map(|v| v.into_iter().collect())
    }
}

/// Builds a [`NodeIdSet`] from a list of node ids.
#[macro_export]
macro_rules! node_set {
    () => { $crate::NodeIdSet::new() };
    ($($node:expr),+ $(,)?) => {{
        let mut set = $crate::NodeIdSet::new();
        $( set.insert($node); )+
        set
    }};
}

/// A deduplicated collection of node sets, kept in lexicographic order.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeSetFamily {
    sets: Vec<NodeIdSet>,
}

impl NodeSetFamily {
    pub fn new() -> Self {
        Self::default()
    }

    /// The family `{∅}`, reported when quorum intersection fails.
    pub fn with_empty_set() -> Self {
        Self {
            sets: vec![NodeIdSet::new()],
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, NodeIdSet> {
        self.sets.iter()
    }

    pub fn as_slice(&self) -> &[NodeIdSet] {
        &self.sets
    }

    pub fn into_vec(self) -> Vec<NodeIdSet> {
        self.sets
    }

    pub fn contains(&self, set: &NodeIdSet) -> bool {
        self.sets.binary_search(set).is_ok()
    }

    /// Union of all member sets.
    pub fn union(&self) -> NodeIdSet {
        let mut all = NodeIdSet::new();
        for set in &self.sets {
            all.union_with(set);
        }
        all
    }

    /// `true` iff the family is exactly `{∅}`.
    pub fn is_empty_set_only(&self) -> bool {
        self.sets.len() == 1 && self.sets[0].is_empty()
    }
}

impl From<Vec<NodeIdSet>> for NodeSetFamily {
    fn from(mut sets: Vec<NodeIdSet>) -> Self {
        sets.sort_unstable();
        sets.dedup();
        Self { sets }
    }
}

impl FromIterator<NodeIdSet> for NodeSetFamily {
    fn from_iter<I: IntoIterator<Item = NodeIdSet>>(iter: I) -> Self {
        iter.into_iter().collect::<Vec<_>>().into()
    }
}

impl IntoIterator for NodeSetFamily {
    type Item = NodeIdSet;
    type IntoIter = std::vec::IntoIter<NodeIdSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.sets.into_iter()
    }
}

impl<'a> IntoIterator for &'a NodeSetFamily {
    type Item = &'a NodeIdSet;
    type IntoIter = std::slice::Iter<'a, NodeIdSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.sets.iter()
    }
}

impl fmt::Debug for NodeSetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sets.iter()).finish()
    }
}
