//! The FBAS data model and the satisfaction predicates every analysis builds on.
//!
//! Quorum slices are never materialized. A set `q` is a slice for node `v`
//! iff `v ∈ q` and `q` satisfies `v`'s quorum set, so every question about
//! slices is answered through [`QuorumSet::is_satisfied_by`].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::node_set::{NodeId, NodeIdSet};

/// Recursive `(validators, inner quorum sets, threshold)` configuration.
///
/// Validators are kept sorted and deduplicated; inner quorum sets are kept as
/// given, since each one counts individually towards the threshold.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuorumSet {
    validators: Vec<NodeId>,
    inner_quorum_sets: Vec<QuorumSet>,
    threshold: usize,
}

impl QuorumSet {
    pub fn new(
        mut validators: Vec<NodeId>,
        inner_quorum_sets: Vec<QuorumSet>,
        threshold: usize,
    ) -> Self {
        validators.sort_unstable();
        validators.dedup();
        Self {
            validators,
            inner_quorum_sets,
            threshold,
        }
    }

    /// Non-nested quorum set `(validators, ∅, threshold)`.
    pub fn flat(validators: impl IntoIterator<Item = NodeId>, threshold: usize) -> Self {
        Self::new(validators.into_iter().collect(), vec![], threshold)
    }

    /// A quorum set no node set can satisfy.
    pub fn unsatisfiable() -> Self {
        Self::new(vec![], vec![], 1)
    }

    pub fn validators(&self) -> &[NodeId] {
        &self.validators
    }

    pub fn inner_quorum_sets(&self) -> &[QuorumSet] {
        &self.inner_quorum_sets
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// Number of members (validators plus inner quorum sets) that can count towards the threshold.
    pub fn member_count(&self) -> usize {
        self.validators.len() + self.inner_quorum_sets.len()
    }

    /// `|candidate ∩ validators| + |{inner satisfied by candidate}| ≥ threshold`.
    pub fn is_satisfied_by(&self, candidate: &NodeIdSet) -> bool {
        let mut needed = self.threshold;
        if needed == 0 {
            return true;
        }
        let mut left = self.member_count();
        for &validator in &self.validators {
            left -= 1;
            if candidate.contains(validator) {
                needed -= 1;
                if needed == 0 {
                    return true;
                }
            } else if left < needed {
                return false;
            }
        }
        for inner in &self.inner_quorum_sets {
            left -= 1;
            if inner.is_satisfied_by(candidate) {
                needed -= 1;
                if needed == 0 {
                    return true;
                }
            } else if left < needed {
                return false;
            }
        }
        false
    }

    /// `true` iff some node set satisfies this quorum set.
    pub fn is_satisfiable(&self) -> bool {
        let satisfiable_inner = self
            .inner_quorum_sets
            .iter()
            .filter(|inner| inner.is_satisfiable())
            .count();
        self.threshold <= self.validators.len() + satisfiable_inner
    }

    /// All nodes mentioned anywhere in the quorum set.
    pub fn contained_nodes(&self) -> NodeIdSet {
        let mut nodes = NodeIdSet::new();
        self.collect_nodes(&mut nodes);
        nodes
    }

    fn collect_nodes(&self, nodes: &mut NodeIdSet) {
        nodes.extend(self.validators.iter().copied());
        for inner in &self.inner_quorum_sets {
            inner.collect_nodes(nodes);
        }
    }

    /// `true` iff no node is mentioned more than once across the whole structure.
    pub fn has_distinct_members(&self) -> bool {
        fn walk(qset: &QuorumSet, seen: &mut NodeIdSet) -> bool {
            qset.validators.iter().all(|&v| seen.insert(v))
                && qset.inner_quorum_sets.iter().all(|inner| walk(inner, seen))
        }
        walk(self, &mut NodeIdSet::new())
    }

    /// Canonical form for structural comparison: validators sorted (always the
    /// case) and inner quorum sets recursively normalized and sorted.
    pub fn standard_form(&self) -> QuorumSet {
        let mut inner: Vec<QuorumSet> = self
            .inner_quorum_sets
            .iter()
            .map(QuorumSet::standard_form)
            .collect();
        inner.sort();
        QuorumSet {
            validators: self.validators.clone(),
            inner_quorum_sets: inner,
            threshold: self.threshold,
        }
    }

    /// Whether two node sets satisfying this quorum set can exist whose
    /// overlap (on the nodes mentioned here) lies within `allowed`.
    ///
    /// Every occurrence of a node is treated independently, so for quorum sets
    /// that mention a node twice this may answer `true` when the exact answer
    /// is `false`, but never the other way around.
    pub fn is_splittable_within(&self, allowed: &NodeIdSet) -> bool {
        let mut shared = 0;
        let mut single = 0;
        for &validator in &self.validators {
            if allowed.contains(validator) {
                shared += 1;
            } else {
                single += 1;
            }
        }
        for inner in &self.inner_quorum_sets {
            if inner.is_splittable_within(allowed) {
                shared += 1;
            } else if inner.is_satisfiable() {
                single += 1;
            }
        }
        single >= 2 * self.threshold.saturating_sub(shared)
    }

    /// Applies `f` to every node; `None` drops the node from the quorum set.
    /// Thresholds are left unchanged.
    pub fn filter_map_nodes(&self, f: &impl Fn(NodeId) -> Option<NodeId>) -> QuorumSet {
        QuorumSet::new(
            self.validators.iter().filter_map(|&v| f(v)).collect(),
            self.inner_quorum_sets
                .iter()
                .map(|inner| inner.filter_map_nodes(f))
                .collect(),
            self.threshold,
        )
    }

    /// Maximum node id mentioned, if any.
    fn max_node(&self) -> Option<NodeId> {
        self.validators
            .last()
            .copied()
            .into_iter()
            .chain(
                self.inner_quorum_sets
                    .iter()
                    .filter_map(QuorumSet::max_node),
            )
            .max()
    }

    /// Any threshold-0 quorum set in the structure.
    pub fn has_zero_threshold(&self) -> bool {
        self.threshold == 0
            || self
                .inner_quorum_sets
                .iter()
                .any(QuorumSet::has_zero_threshold)
    }
}

/// Free-function form of [`QuorumSet::is_satisfied_by`].
pub fn satisfies(candidate: &NodeIdSet, quorum_set: &QuorumSet) -> bool {
    quorum_set.is_satisfied_by(candidate)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub public_key: String,
    pub quorum_set: QuorumSet,
}

/// A node population together with one quorum set per node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fbas {
    nodes: Vec<Node>,
    index: HashMap<String, NodeId>,
}

impl Fbas {
    /// Validates that every referenced node exists and public keys are unique.
    pub fn new(nodes: Vec<Node>) -> Result<Self> {
        let population = nodes.len();
        let mut index = HashMap::with_capacity(population);
        for (id, node) in nodes.iter().enumerate() {
            if index.insert(node.public_key.clone(), id).is_some() {
                return Err(Error::DuplicatePublicKey(node.public_key.clone()));
            }
            if let Some(referenced) = node.quorum_set.max_node() {
                if referenced >= population {
                    return Err(Error::UnknownNode {
                        owner: id,
                        referenced,
                        population,
                    });
                }
            }
        }
        Ok(Self { nodes, index })
    }

    /// Nodes named by their index (`"0"`, `"1"`, ...).
    pub fn from_quorum_sets(quorum_sets: Vec<QuorumSet>) -> Result<Self> {
        Self::new(
            quorum_sets
                .into_iter()
                .enumerate()
                .map(|(id, quorum_set)| Node {
                    public_key: id.to_string(),
                    quorum_set,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn quorum_set(&self, node: NodeId) -> &QuorumSet {
        &self.nodes[node].quorum_set
    }

    pub fn public_key(&self, node: NodeId) -> &str {
        &self.nodes[node].public_key
    }

    pub fn node_id(&self, public_key: &str) -> Option<NodeId> {
        self.index.get(public_key).copied()
    }

    pub fn all_nodes(&self) -> NodeIdSet {
        NodeIdSet::full(self.len())
    }

    /// `node ∈ candidate` and `candidate` satisfies `Q(node)`.
    pub fn is_slice_for(&self, candidate: &NodeIdSet, node: NodeId) -> bool {
        candidate.contains(node) && self.quorum_set(node).is_satisfied_by(candidate)
    }

    /// Non-empty and containing a slice for each member.
    pub fn is_quorum(&self, candidate: &NodeIdSet) -> bool {
        !candidate.is_empty()
            && candidate
                .iter()
                .all(|node| self.quorum_set(node).is_satisfied_by(candidate))
    }

    /// Every member of `partial` has a slice inside `partial ∪ available`.
    pub fn is_satisfiable(&self, partial: &NodeIdSet, available: &NodeIdSet) -> bool {
        self.all_satisfied_within(partial, &partial.union(available))
    }

    /// Every member of `members` is satisfied by `pool` (callers ensure `members ⊆ pool`).
    pub(crate) fn all_satisfied_within(&self, members: &NodeIdSet, pool: &NodeIdSet) -> bool {
        members
            .iter()
            .all(|node| self.quorum_set(node).is_satisfied_by(pool))
    }

    /// Repeatedly deletes members without a slice inside the remaining set.
    /// The fixed point is the greatest quorum contained in `candidate` (or empty).
    pub fn greatest_quorum_within(&self, candidate: &NodeIdSet) -> NodeIdSet {
        let mut remaining = candidate.clone();
        loop {
            let mut changed = false;
            for node in candidate.iter() {
                if remaining.contains(node) && !self.quorum_set(node).is_satisfied_by(&remaining) {
                    remaining.remove(node);
                    changed = true;
                }
            }
            if !changed {
                return remaining;
            }
        }
    }

    pub fn contains_quorum(&self, candidate: &NodeIdSet) -> bool {
        !self.greatest_quorum_within(candidate).is_empty()
    }

    /// Directed edges `(v, w)` iff `w ≠ v` appears anywhere in `Q(v)`.
    pub fn heuristic_graph(&self) -> Vec<Vec<NodeId>> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(owner, node)| {
                node.quorum_set
                    .contained_nodes()
                    .iter()
                    .filter(|&w| w != owner)
                    .collect()
            })
            .collect()
    }

    /// Removes `deleted` from the population and from every quorum set,
    /// renumbering the survivors densely. Returns the new FBAS and, for each
    /// old id, its new id.
    pub fn without_nodes(&self, deleted: &NodeIdSet) -> (Fbas, Vec<Option<NodeId>>) {
        let mut mapping = Vec::with_capacity(self.len());
        let mut next = 0;
        for id in 0..self.len() {
            if deleted.contains(id) {
                mapping.push(None);
            } else {
                mapping.push(Some(next));
                next += 1;
            }
        }
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(id, _)| !deleted.contains(*id))
            .map(|(_, node)| Node {
                public_key: node.public_key.clone(),
                quorum_set: node.quorum_set.filter_map_nodes(&|v| mapping[v]),
            })
            .collect();
        let fbas = Fbas::new(nodes).expect("renumbered FBAS stays consistent");
        (fbas, mapping)
    }

    /// Marks `failed` nodes as unable to satisfy anyone by giving them
    /// unsatisfiable quorum sets; they can then never be part of a quorum.
    pub fn with_failed_nodes(&self, failed: &NodeIdSet) -> Fbas {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, node)| Node {
                public_key: node.public_key.clone(),
                quorum_set: if failed.contains(id) {
                    QuorumSet::unsatisfiable()
                } else {
                    node.quorum_set.clone()
                },
            })
            .collect();
        Fbas::new(nodes).expect("same population stays consistent")
    }
}

/// A named group of nodes (an organization, ISP, country, ...).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouping {
    pub name: String,
    pub members: NodeIdSet,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::node_set;
    use proptest::prelude::*;

    /// Three-node example: `Q(0)=({1,2},∅,1)`, `Q(1)=({0,2},∅,2)`, `Q(2)=({0,1,2},∅,2)`.
    pub(crate) fn three_node_fbas() -> Fbas {
        Fbas::from_quorum_sets(vec![
            QuorumSet::flat([1, 2], 1),
            QuorumSet::flat([0, 2], 2),
            QuorumSet::flat([0, 1, 2], 2),
        ])
        .unwrap()
    }

    pub(crate) fn five_node_fbas() -> Fbas {
        Fbas::from_quorum_sets(vec![
            QuorumSet::flat([0, 1, 2, 3, 4], 3),
            QuorumSet::flat([0, 1, 2], 3),
            QuorumSet::flat([0, 1, 2], 3),
            QuorumSet::flat([0, 3, 4], 3),
            QuorumSet::flat([0, 3, 4], 3),
        ])
        .unwrap()
    }

    pub(crate) fn cascading_fbas() -> Fbas {
        let all = 0..7;
        Fbas::from_quorum_sets(vec![
            QuorumSet::flat([0, 1, 2], 3),
            QuorumSet::flat([0, 1, 2, 3], 3),
            QuorumSet::flat(all.clone(), 5),
            QuorumSet::flat(all.clone(), 5),
            QuorumSet::flat(all.clone(), 5),
            QuorumSet::flat(all.clone(), 5),
            QuorumSet::flat(all, 5),
        ])
        .unwrap()
    }

    #[test]
    fn satisfies_examples() {
        assert!(satisfies(&node_set![0], &QuorumSet::flat([0, 1], 1)));
        let nested = QuorumSet::new(vec![0], vec![QuorumSet::flat([1, 2, 3], 2)], 1);
        assert!(satisfies(&node_set![1, 2], &nested));
        assert!(!satisfies(&node_set![1], &nested));
    }

    #[test]
    fn zero_threshold_is_always_satisfied() {
        assert!(QuorumSet::flat([3], 0).is_satisfied_by(&NodeIdSet::new()));
    }

    #[test]
    fn oversized_threshold_is_never_satisfied() {
        let qset = QuorumSet::flat([0, 1], 3);
        assert!(!qset.is_satisfied_by(&node_set![0, 1, 2]));
        assert!(!qset.is_satisfiable());
    }

    #[test]
    fn duplicate_validators_are_deduplicated_but_inner_sets_are_not() {
        let qset = QuorumSet::new(
            vec![1, 1, 0],
            vec![QuorumSet::flat([2], 1), QuorumSet::flat([2], 1)],
            3,
        );
        assert_eq!(qset.validators(), &[0, 1]);
        assert_eq!(qset.inner_quorum_sets().len(), 2);
        // {0, 2} counts validator 0 plus both copies of the inner set.
        assert!(qset.is_satisfied_by(&node_set![0, 2]));
    }

    #[test]
    fn slice_examples() {
        let fbas = three_node_fbas();
        assert!(fbas.is_slice_for(&node_set![0, 2], 2));
        assert!(!fbas.is_slice_for(&node_set![0, 2], 1));
        assert!(fbas.is_slice_for(&node_set![0, 1, 2], 1));
    }

    #[test]
    fn quorum_examples() {
        assert!(three_node_fbas().is_quorum(&node_set![0, 2]));
        assert!(five_node_fbas().is_quorum(&node_set![0, 1, 2]));
        assert!(!five_node_fbas().is_quorum(&NodeIdSet::new()));
    }

    #[test]
    fn is_satisfiable_examples() {
        let fbas = three_node_fbas();
        assert!(fbas.is_satisfiable(&node_set![1], &node_set![0, 2]));
        assert!(!fbas.is_satisfiable(&node_set![1], &node_set![2]));
        assert!(fbas.is_satisfiable(&NodeIdSet::new(), &node_set![1]));
    }

    #[test]
    fn contains_quorum_examples() {
        assert!(five_node_fbas().contains_quorum(&node_set![0, 1, 2, 3, 4]));
        assert!(!five_node_fbas().contains_quorum(&node_set![1, 2, 3, 4]));
        assert!(!cascading_fbas().contains_quorum(&node_set![3, 4, 5, 6]));
    }

    #[test]
    fn greatest_quorum_within_cascades() {
        // Without node 2, nodes 0 and 1 fall, and then everyone else.
        let fbas = cascading_fbas();
        assert!(fbas
            .greatest_quorum_within(&node_set![0, 1, 3, 4, 5, 6])
            .is_empty());
        assert_eq!(
            fbas.greatest_quorum_within(&node_set![0, 2, 3, 4, 5, 6]),
            node_set![2, 3, 4, 5, 6]
        );
    }

    #[test]
    fn unknown_reference_is_rejected() {
        let err = Fbas::from_quorum_sets(vec![QuorumSet::flat([0, 1], 1)]).unwrap_err();
        assert!(matches!(err, Error::UnknownNode { referenced: 1, .. }));
    }

    #[test]
    fn without_nodes_renumbers_and_strips_references() {
        let (fbas, mapping) = five_node_fbas().without_nodes(&node_set![1]);
        assert_eq!(fbas.len(), 4);
        assert_eq!(mapping, vec![Some(0), None, Some(1), Some(2), Some(3)]);
        assert_eq!(fbas.quorum_set(1), &QuorumSet::flat([0, 1], 3));
        assert_eq!(fbas.public_key(1), "2");
    }

    #[test]
    fn splittable_within_flat() {
        // Two 3-of-4 sets overlap in at least two nodes.
        let qset = QuorumSet::flat([0, 1, 2, 3], 3);
        assert!(qset.is_splittable_within(&node_set![0, 1]));
        assert!(!qset.is_splittable_within(&node_set![0]));
        // Two disjoint 2-of-4 sets exist.
        assert!(QuorumSet::flat([0, 1, 2, 3], 2).is_splittable_within(&NodeIdSet::new()));
    }

    #[test]
    fn splittable_within_nested_uses_disjoint_inner_choices() {
        // ({}, {({0,1},∅,1)}, 1): {0} and {1} both satisfy, disjoint.
        let qset = QuorumSet::new(vec![], vec![QuorumSet::flat([0, 1], 1)], 1);
        assert!(qset.is_splittable_within(&NodeIdSet::new()));
        let qset = QuorumSet::new(vec![], vec![QuorumSet::flat([0, 1], 2)], 1);
        assert!(!qset.is_splittable_within(&node_set![0]));
        assert!(qset.is_splittable_within(&node_set![0, 1]));
    }

    fn arb_quorum_set(n: usize) -> impl Strategy<Value = QuorumSet> {
        let leaf = (prop::collection::vec(0..n, 0..=n), 0usize..=4)
            .prop_map(|(validators, t)| QuorumSet::new(validators, vec![], t));
        leaf.prop_recursive(2, 8, 3, move |inner| {
            (
                prop::collection::vec(0..n, 0..=n),
                prop::collection::vec(inner, 0..3),
                0usize..=4,
            )
                .prop_map(|(validators, inner, t)| QuorumSet::new(validators, inner, t))
        })
    }

    fn subsets(n: usize) -> impl Iterator<Item = NodeIdSet> {
        (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
    }

    proptest! {
        #[test]
        fn satisfaction_is_monotone(qset in arb_quorum_set(6), a in 0u32..64, b in 0u32..64) {
            let small: NodeIdSet = (0..6).filter(|i| a & (1 << i) != 0).collect();
            let large = small.union(&(0..6).filter(|i| b & (1 << i) != 0).collect());
            if qset.is_satisfied_by(&small) {
                prop_assert!(qset.is_satisfied_by(&large));
            }
        }

        #[test]
        fn satisfiable_iff_some_subset_satisfies(qset in arb_quorum_set(5)) {
            let exists = subsets(5).any(|s| qset.is_satisfied_by(&s));
            prop_assert_eq!(qset.is_satisfiable(), exists);
        }

        /// `is_splittable_within` never rules out a pair of satisfying sets that exists.
        #[test]
        fn splittable_within_is_an_over_approximation(qset in arb_quorum_set(4), allowed in 0u32..16) {
            let allowed: NodeIdSet = (0..4).filter(|i| allowed & (1 << i) != 0).collect();
            let satisfying: Vec<NodeIdSet> = subsets(4).filter(|s| qset.is_satisfied_by(s)).collect();
            let exact = satisfying.iter().any(|a| {
                satisfying.iter().any(|b| a.intersection(b).is_subset(&allowed))
            });
            if exact {
                prop_assert!(qset.is_splittable_within(&allowed));
            }
            if qset.has_distinct_members() {
                prop_assert_eq!(qset.is_splittable_within(&allowed), exact);
            }
        }
    }

    /// For every node and every candidate set, `is_slice_for` agrees with
    /// membership in the explicitly enumerated slice family.
    #[test]
    fn slices_match_explicit_enumeration() {
        for fbas in [three_node_fbas(), five_node_fbas(), cascading_fbas()] {
            let n = fbas.len();
            for node in 0..n {
                let qset = fbas.quorum_set(node);
                let slices: Vec<NodeIdSet> = subsets(n)
                    .filter(|q| q.contains(node))
                    .filter(|q| {
                        let hits = qset.validators().iter().filter(|v| q.contains(**v)).count();
                        hits >= qset.threshold()
                    })
                    .collect();
                for candidate in subsets(n) {
                    assert_eq!(
                        fbas.is_slice_for(&candidate, node),
                        slices.contains(&candidate),
                        "node {node}, candidate {candidate:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn three_node_slices_match_listing() {
        let fbas = three_node_fbas();
        let slices_of = |node| -> Vec<NodeIdSet> {
            subsets(3).filter(|q| fbas.is_slice_for(q, node)).collect()
        };
        assert_eq!(
            slices_of(0),
            vec![node_set![0, 1], node_set![0, 2], node_set![0, 1, 2]]
        );
        assert_eq!(slices_of(1), vec![node_set![0, 1, 2]]);
        assert_eq!(
            slices_of(2),
            vec![node_set![0, 2], node_set![1, 2], node_set![0, 1, 2]]
        );
    }
}
