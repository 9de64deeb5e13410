//! Availability and safety under a given set of faulty nodes.

use crate::analysis::intersection::has_quorum_intersection_complement;
use crate::fbas::{Fbas, Node, QuorumSet};
use crate::node_set::{NodeId, NodeIdSet};

/// Some quorum survives when `failed` nodes stop participating.
pub fn has_quorum_despite(fbas: &Fbas, failed: &NodeIdSet) -> bool {
    fbas.contains_quorum(&fbas.all_nodes().difference(failed))
}

/// Quorum intersection holds among the correct nodes when the `faulty` nodes
/// may vote for anything: they are deleted from the population and count as
/// present in every quorum set that mentions them.
pub fn has_quorum_intersection_despite(fbas: &Fbas, faulty: &NodeIdSet) -> bool {
    has_quorum_intersection_complement(&assuming_present(fbas, faulty))
}

/// Deletes `nodes`, lowering thresholds for every occurrence removed.
pub fn assuming_present(fbas: &Fbas, nodes: &NodeIdSet) -> Fbas {
    let (_, mapping) = fbas.without_nodes(nodes);
    let survivors = (0..fbas.len())
        .filter(|&id| !nodes.contains(id))
        .map(|id| Node {
            public_key: fbas.public_key(id).to_owned(),
            quorum_set: collapse(fbas.quorum_set(id), nodes, &mapping),
        })
        .collect();
    Fbas::new(survivors).expect("renumbered FBAS stays consistent")
}

fn collapse(qset: &QuorumSet, present: &NodeIdSet, mapping: &[Option<NodeId>]) -> QuorumSet {
    let mut satisfied = 0;
    let validators = qset
        .validators()
        .iter()
        .filter_map(|&v| {
            if present.contains(v) {
                satisfied += 1;
            }
            mapping[v]
        })
        .collect();
    let mut inner = vec![];
    for inner_qset in qset.inner_quorum_sets() {
        let collapsed = collapse(inner_qset, present, mapping);
        if collapsed.threshold() == 0 {
            satisfied += 1;
        } else {
            inner.push(collapsed);
        }
    }
    QuorumSet::new(
        validators,
        inner,
        qset.threshold().saturating_sub(satisfied),
    )
}
