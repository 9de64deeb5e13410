//! Branch-and-bound enumeration of minimal blocking sets.

use crate::fbas::Fbas;
use crate::node_set::{NodeId, NodeIdSet, NodeSetFamily};
use crate::preprocess::{
    rank_nodes, reduce_to_relevant, SymmetricNodes, SymmetryChain, DEFAULT_DAMPING,
};

/// All minimal node sets that intersect every quorum.
///
/// If the FBAS has no quorum at all, the empty set is (vacuously) blocking
/// and the result is `{∅}`.
pub fn find_minimal_blocking_sets(fbas: &Fbas) -> NodeSetFamily {
    find_minimal_blocking_sets_within(fbas, &reduce_to_relevant(fbas), true)
}

/// Same as [`find_minimal_blocking_sets`], but branches only over `domain`,
/// which must contain every minimal quorum (the relevant nodes or the top tier).
/// With `node_symmetry`, interchangeable nodes are only added in order.
pub fn find_minimal_blocking_sets_within(
    fbas: &Fbas,
    domain: &NodeIdSet,
    node_symmetry: bool,
) -> NodeSetFamily {
    let order = rank_nodes(fbas, DEFAULT_DAMPING).restricted_to(domain);
    let symmetries = if node_symmetry {
        SymmetricNodes::find(fbas, domain)
    } else {
        SymmetricNodes::default()
    };
    let mut search = Search {
        fbas,
        domain,
        chain: symmetries.chain(&order),
        total: order.len(),
        found: vec![],
    };
    let mut pool = domain.clone();
    search.step(&order, &mut NodeIdSet::new(), &mut pool);
    symmetries.expand(search.found).into()
}

struct Search<'a> {
    fbas: &'a Fbas,
    domain: &'a NodeIdSet,
    chain: SymmetryChain,
    total: usize,
    found: Vec<NodeIdSet>,
}

impl Search<'_> {
    /// No quorum survives inside `domain \ candidate`.
    fn is_blocking(&self, candidate: &NodeIdSet) -> bool {
        !self
            .fbas
            .contains_quorum(&self.domain.difference(candidate))
    }

    fn is_minimal_blocking(&self, candidate: &NodeIdSet) -> bool {
        let mut reduced = candidate.clone();
        candidate.iter().all(|node| {
            reduced.remove(node);
            let still_blocking = self.is_blocking(&reduced);
            reduced.insert(node);
            !still_blocking
        })
    }

    /// `pool` is the candidate plus all undecided nodes of `order` that may
    /// still join it.
    fn step(&mut self, order: &[NodeId], candidate: &mut NodeIdSet, pool: &mut NodeIdSet) {
        if self.is_blocking(candidate) {
            if self.is_minimal_blocking(candidate) {
                self.found.push(candidate.clone());
            }
            return;
        }
        let Some((&next, rest)) = order.split_first() else {
            return;
        };
        if !self.is_blocking(pool) {
            return;
        }
        let position = self.total - order.len();
        if self.chain.allows(position, candidate) {
            candidate.insert(next);
            self.step(rest, candidate, pool);
            candidate.remove(next);
        }
        let mut skipped = self.chain.excluded_with(position).intersection(pool);
        skipped.insert(next);
        pool.difference_with(&skipped);
        self.step(rest, candidate, pool);
        pool.union_with(&skipped);
    }
}
