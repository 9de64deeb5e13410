//! Quorum intersection checks.
//!
//! Pairwise intersection of minimal quorums is equivalent to pairwise
//! intersection of all quorums, so both checks work on minimal quorums only.

use std::ops::ControlFlow;

use crate::analysis::quorums::{find_minimal_quorums, for_each_minimal_quorum};
use crate::fbas::Fbas;
use crate::node_set::NodeSetFamily;

/// Enumerates all minimal quorums, then checks every pair for a shared node.
pub fn has_quorum_intersection_pairwise(fbas: &Fbas) -> bool {
    all_pairs_intersect(&find_minimal_quorums(fbas))
}

pub(crate) fn all_pairs_intersect(minimal_quorums: &NodeSetFamily) -> bool {
    let sets = minimal_quorums.as_slice();
    sets.iter()
        .enumerate()
        .all(|(i, a)| sets[i + 1..].iter().all(|b| !a.is_disjoint(b)))
}

/// Streams minimal quorums and checks whether the complement of any of them
/// still contains a quorum. Holds a constant number of node sets at a time.
pub fn has_quorum_intersection_complement(fbas: &Fbas) -> bool {
    let all = fbas.all_nodes();
    for_each_minimal_quorum(fbas, |quorum| {
        if fbas.contains_quorum(&all.difference(quorum)) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .is_continue()
}

/// Complement check over an already enumerated family of minimal quorums,
/// preceded by the shortcut: if every minimal quorum holds more than half of
/// the top tier, any two of them must overlap.
pub fn has_quorum_intersection_given(fbas: &Fbas, minimal_quorums: &NodeSetFamily) -> bool {
    if intersection_guaranteed_by_size(minimal_quorums) {
        return true;
    }
    let all = fbas.all_nodes();
    minimal_quorums
        .iter()
        .all(|quorum| !fbas.contains_quorum(&all.difference(quorum)))
}

/// `true` iff every minimal quorum has cardinality greater than half the
/// size of their union.
pub fn intersection_guaranteed_by_size(minimal_quorums: &NodeSetFamily) -> bool {
    let top_tier_size = minimal_quorums.union().len();
    minimal_quorums
        .iter()
        .all(|quorum| 2 * quorum.len() > top_tier_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fbas::tests::{cascading_fbas, five_node_fbas};
    use crate::fbas::QuorumSet;
    use crate::node_set;

    fn both(fbas: &Fbas) -> (bool, bool) {
        (
            has_quorum_intersection_pairwise(fbas),
            has_quorum_intersection_complement(fbas),
        )
    }

    #[test]
    fn five_node_example_intersects() {
        assert_eq!(both(&five_node_fbas()), (true, true));
    }

    #[test]
    fn cascading_example_intersects() {
        assert_eq!(both(&cascading_fbas()), (true, true));
    }

    #[test]
    fn extra_disjoint_quorum_breaks_intersection() {
        // Quorums {0,2} and {1,4}.
        let fbas = Fbas::from_quorum_sets(vec![
            QuorumSet::flat([0, 2], 2),
            QuorumSet::flat([1, 4], 2),
            QuorumSet::flat([0, 2], 2),
            QuorumSet::flat([2, 3], 2),
            QuorumSet::flat([1, 4], 2),
        ])
        .unwrap();
        assert_eq!(both(&fbas), (false, false));
    }

    #[test]
    fn single_self_quorum_intersects() {
        let fbas = Fbas::from_quorum_sets(vec![QuorumSet::flat([0], 1)]).unwrap();
        assert_eq!(both(&fbas), (true, true));
    }

    #[test]
    fn two_independent_nodes_do_not_intersect() {
        let fbas =
            Fbas::from_quorum_sets(vec![QuorumSet::flat([0], 1), QuorumSet::flat([1], 1)]).unwrap();
        assert_eq!(both(&fbas), (false, false));
    }

    #[test]
    fn size_shortcut() {
        let majority: NodeSetFamily =
            vec![node_set![0, 1], node_set![1, 2], node_set![0, 2]].into();
        assert!(intersection_guaranteed_by_size(&majority));
        let five: NodeSetFamily = vec![node_set![0, 1, 2], node_set![0, 3, 4]].into();
        assert!(intersection_guaranteed_by_size(&five));
        let star: NodeSetFamily = vec![node_set![0, 1], node_set![0, 2], node_set![0, 3]].into();
        assert!(!intersection_guaranteed_by_size(&star));
    }
}
