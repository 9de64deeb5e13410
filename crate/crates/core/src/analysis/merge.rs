//! Collapsing node-level results to organizations (or any other grouping).

use crate::analysis::{reduce_to_minimal_sets, AnalysisResult};
use crate::error::{Error, Result};
use crate::fbas::{Fbas, Grouping};
use crate::node_set::{NodeId, NodeIdSet, NodeSetFamily};

/// Maps every node to the smallest member of its grouping; ungrouped nodes
/// map to themselves. Rejects a node claimed by two groupings.
pub fn representatives(groupings: &[Grouping]) -> Result<Vec<(NodeId, NodeId)>> {
    let mut owner: Vec<(NodeId, usize)> = vec![];
    for (index, grouping) in groupings.iter().enumerate() {
        for node in grouping.members.iter() {
            if let Some(&(_, first)) = owner.iter().find(|(n, _)| *n == node) {
                return Err(Error::OverlappingGroupings {
                    node: node.to_string(),
                    first: groupings[first].name.clone(),
                    second: grouping.name.clone(),
                });
            }
            owner.push((node, index));
        }
    }
    Ok(owner
        .into_iter()
        .filter_map(|(node, index)| {
            groupings[index]
                .members
                .first()
                .map(|representative| (node, representative))
        })
        .collect())
}

/// Replaces every node by its grouping's representative, then re-reduces
/// each family to its minimal sets.
pub fn merge_families_by_group(
    result: &AnalysisResult,
    groupings: &[Grouping],
) -> Result<AnalysisResult> {
    let mapping = representatives(groupings)?;
    let map_node = |node: NodeId| {
        mapping
            .iter()
            .find(|(n, _)| *n == node)
            .map_or(node, |&(_, representative)| representative)
    };
    let map_set = |set: &NodeIdSet| -> NodeIdSet { set.iter().map(map_node).collect() };
    let map_family = |family: &NodeSetFamily| -> NodeSetFamily {
        reduce_to_minimal_sets(family.iter().map(map_set).collect())
    };
    Ok(AnalysisResult {
        minimal_quorums: map_family(&result.minimal_quorums),
        has_quorum_intersection: result.has_quorum_intersection,
        minimal_blocking_sets: map_family(&result.minimal_blocking_sets),
        minimal_splitting_sets: map_family(&result.minimal_splitting_sets),
        top_tier: map_set(&result.top_tier),
        warnings: result.warnings.clone(),
    })
}

/// Display name per node id: the grouping name for each grouping's
/// representative, the public key otherwise.
pub fn merged_labels(fbas: &Fbas, groupings: &[Grouping]) -> Vec<String> {
    let mut labels: Vec<String> = fbas.nodes().iter().map(|n| n.public_key.clone()).collect();
    for grouping in groupings {
        if let Some(representative) = grouping.members.first() {
            labels[representative] = grouping.name.clone();
        }
    }
    labels
}
