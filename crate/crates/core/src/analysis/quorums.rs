//! Branch-and-bound enumeration of minimal quorums.

use std::ops::ControlFlow;

use crate::fbas::Fbas;
use crate::node_set::{NodeId, NodeIdSet, NodeSetFamily};
use crate::preprocess::{
    rank_nodes, relevant_components, SymmetricNodes, SymmetryChain, DEFAULT_DAMPING,
};

/// All quorums none of whose proper subsets is a quorum.
pub fn find_minimal_quorums(fbas: &Fbas) -> NodeSetFamily {
    find_minimal_quorums_with(fbas, true)
}

/// [`find_minimal_quorums`], optionally without collapsing interchangeable
/// nodes.
pub fn find_minimal_quorums_with(fbas: &Fbas, node_symmetry: bool) -> NodeSetFamily {
    let mut found = vec![];
    let _ = for_each_minimal_quorum_with(fbas, node_symmetry, |quorum| {
        found.push(quorum.clone());
        ControlFlow::Continue(())
    });
    found.into()
}

/// Streams minimal quorums to `visit` without storing them; stops as soon as
/// `visit` breaks. Each minimal quorum is visited exactly once.
///
/// Every minimal quorum lies inside a single strongly connected component of
/// the heuristic graph, so each quorum-containing component is searched on
/// its own, branching over its nodes in PageRank order. Interchangeable
/// nodes are only selected in order; each canonical quorum found is then
/// expanded into all of its images.
pub fn for_each_minimal_quorum(
    fbas: &Fbas,
    visit: impl FnMut(&NodeIdSet) -> ControlFlow<()>,
) -> ControlFlow<()> {
    for_each_minimal_quorum_with(fbas, true, visit)
}

pub fn for_each_minimal_quorum_with(
    fbas: &Fbas,
    node_symmetry: bool,
    mut visit: impl FnMut(&NodeIdSet) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let ranking = rank_nodes(fbas, DEFAULT_DAMPING);
    for component in relevant_components(fbas) {
        let order = ranking.restricted_to(&component);
        let symmetries = if node_symmetry {
            SymmetricNodes::find(fbas, &component)
        } else {
            SymmetricNodes::default()
        };
        let mut search = Search {
            fbas,
            chain: symmetries.chain(&order),
            total: order.len(),
            visit: |quorum: &NodeIdSet| {
                if symmetries.is_empty() {
                    return visit(quorum);
                }
                for image in symmetries.expand([quorum.clone()]) {
                    visit(&image)?;
                }
                ControlFlow::Continue(())
            },
        };
        let mut available = component;
        search.step(&order, &mut NodeIdSet::new(), &mut available, true)?;
    }
    ControlFlow::Continue(())
}

/// `true` iff no `U \ {v}` still contains a quorum.
pub fn is_minimal_for_quorum(fbas: &Fbas, quorum: &NodeIdSet) -> bool {
    let mut reduced = quorum.clone();
    quorum.iter().all(|node| {
        reduced.remove(node);
        let minimal = !fbas.contains_quorum(&reduced);
        reduced.insert(node);
        minimal
    })
}

struct Search<'a, F> {
    fbas: &'a Fbas,
    chain: SymmetryChain,
    total: usize,
    visit: F,
}

impl<F: FnMut(&NodeIdSet) -> ControlFlow<()>> Search<'_, F> {
    /// `selection ⊆ available`; `available` is the selection plus all nodes
    /// of `order` not yet decided.
    fn step(
        &mut self,
        order: &[NodeId],
        selection: &mut NodeIdSet,
        available: &mut NodeIdSet,
        selection_grew: bool,
    ) -> ControlFlow<()> {
        if selection_grew && !selection.is_empty() {
            if self.fbas.is_quorum(selection) {
                if is_minimal_for_quorum(self.fbas, selection) {
                    (self.visit)(selection)?;
                }
                return ControlFlow::Continue(());
            }
            // A quorum strictly inside the selection makes every extension non-minimal.
            if self.fbas.contains_quorum(selection) {
                return ControlFlow::Continue(());
            }
        }
        if !self.fbas.all_satisfied_within(selection, available) {
            return ControlFlow::Continue(());
        }
        let Some((&next, rest)) = order.split_first() else {
            return ControlFlow::Continue(());
        };
        let position = self.total - order.len();

        if self.chain.allows(position, selection) && self.chain.fits_minimal_quorum(position) {
            selection.insert(next);
            let flow = self.step(rest, selection, available, true);
            selection.remove(next);
            flow?;
        }

        let mut skipped = self.chain.excluded_with(position).intersection(available);
        skipped.insert(next);
        available.difference_with(&skipped);
        let flow = self.step(rest, selection, available, false);
        available.union_with(&skipped);
        flow
    }
}
