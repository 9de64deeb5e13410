//! Branch-and-bound enumeration of minimal splitting sets.

use crate::analysis::intersection::has_quorum_intersection_given;
use crate::analysis::quorums::find_minimal_quorums;
use crate::analysis::reduce_to_minimal_sets;
use crate::fbas::Fbas;
use crate::node_set::{NodeId, NodeIdSet, NodeSetFamily};
use crate::preprocess::{rank_nodes, SymmetricNodes, SymmetryChain, DEFAULT_DAMPING};

/// All minimal node sets containing the intersection of two quorums.
///
/// Returns `{∅}` when two disjoint quorums exist. A lone minimal quorum
/// counts as intersecting itself, so an FBAS with exactly one minimal
/// quorum `U` has `U` as its only minimal splitting set.
pub fn find_minimal_splitting_sets(fbas: &Fbas) -> NodeSetFamily {
    let minimal_quorums = find_minimal_quorums(fbas);
    if !has_quorum_intersection_given(fbas, &minimal_quorums) {
        return NodeSetFamily::with_empty_set();
    }
    find_minimal_splitting_sets_given(fbas, &minimal_quorums, true)
}

/// Searches over the top tier of `minimal_quorums`, which must be the
/// complete family of minimal quorums of an FBAS that enjoys quorum
/// intersection. With `node_symmetry`, interchangeable nodes are only added
/// in order.
pub fn find_minimal_splitting_sets_given(
    fbas: &Fbas,
    minimal_quorums: &NodeSetFamily,
    node_symmetry: bool,
) -> NodeSetFamily {
    let top_tier = minimal_quorums.union();
    let order = rank_nodes(fbas, DEFAULT_DAMPING).restricted_to(&top_tier);
    let symmetries = if node_symmetry {
        SymmetricNodes::find(fbas, &top_tier)
    } else {
        SymmetricNodes::default()
    };
    let quorums: Vec<&NodeIdSet> = minimal_quorums.iter().collect();
    let mut search = Search {
        fbas,
        all_nodes: fbas.all_nodes(),
        chain: symmetries.chain(&order),
        total: order.len(),
        found: vec![],
    };
    let mut pool = top_tier;
    search.step(&order, &mut NodeIdSet::new(), &mut pool, &quorums);
    // A canonical hit containing another one has its whole orbit dominated.
    let canonical = reduce_to_minimal_sets(search.found.into());
    reduce_to_minimal_sets(symmetries.expand(canonical.into_vec()).into())
}

struct Search<'a> {
    fbas: &'a Fbas,
    all_nodes: NodeIdSet,
    chain: SymmetryChain,
    total: usize,
    found: Vec<NodeIdSet>,
}

impl Search<'_> {
    /// Every member of `candidate` could be split by two of its slices whose
    /// overlap stays inside `pool`.
    fn has_potential(&self, candidate: &NodeIdSet, pool: &NodeIdSet) -> bool {
        candidate
            .iter()
            .all(|node| self.fbas.quorum_set(node).is_splittable_within(pool))
    }

    /// `quorums` all contain `candidate`; accept if one of them overlaps some
    /// quorum (possibly itself) only inside `candidate`, i.e. if the nodes
    /// outside `q \ candidate` still contain a quorum.
    fn is_intersection(&self, candidate: &NodeIdSet, quorums: &[&NodeIdSet]) -> bool {
        !candidate.is_empty()
            && self.has_potential(candidate, candidate)
            && quorums.iter().any(|q| {
                let outside = self.all_nodes.difference(&q.difference(candidate));
                self.fbas.contains_quorum(&outside)
            })
    }

    /// `pool` is the candidate plus all undecided nodes of `order`.
    fn step(
        &mut self,
        order: &[NodeId],
        candidate: &mut NodeIdSet,
        pool: &mut NodeIdSet,
        quorums: &[&NodeIdSet],
    ) {
        if quorums.is_empty() {
            return;
        }
        if self.is_intersection(candidate, quorums) {
            self.found.push(candidate.clone());
            return;
        }
        if !self.has_potential(candidate, pool) {
            return;
        }
        let Some((&next, rest)) = order.split_first() else {
            return;
        };
        let position = self.total - order.len();

        if self.chain.allows(position, candidate) {
            let with_next: Vec<&NodeIdSet> = quorums
                .iter()
                .copied()
                .filter(|q| q.contains(next))
                .collect();
            candidate.insert(next);
            self.step(rest, candidate, pool, &with_next);
            candidate.remove(next);
        }

        let mut skipped = self.chain.excluded_with(position).intersection(pool);
        skipped.insert(next);
        pool.difference_with(&skipped);
        let touching_pool: Vec<&NodeIdSet> = quorums
            .iter()
            .copied()
            .filter(|q| !q.is_disjoint(pool))
            .collect();
        self.step(rest, candidate, pool, &touching_pool);
        pool.union_with(&skipped);
    }
}
