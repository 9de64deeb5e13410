//! Polynomial-time reductions applied before the exponential enumerations.

use std::collections::{BTreeMap, HashMap};

use petgraph::graph::{DiGraph, NodeIndex};

use crate::fbas::{Fbas, QuorumSet};
use crate::node_set::{NodeId, NodeIdSet};

/// Damping used when ordering nodes for branch-and-bound search.
pub const DEFAULT_DAMPING: f64 = 0.85;

const PAGERANK_TOLERANCE: f64 = 1e-12;
const PAGERANK_MAX_ROUNDS: usize = 1000;

/// Strongly connected components of the heuristic graph (edge `v → w` iff
/// `w` appears in `Q(v)`), in reverse topological order.
pub fn strongly_connected_components(fbas: &Fbas) -> Vec<NodeIdSet> {
    components_of(&fbas.heuristic_graph())
}

pub(crate) fn components_of(adjacency: &[Vec<NodeId>]) -> Vec<NodeIdSet> {
    let mut graph = DiGraph::<(), ()>::with_capacity(adjacency.len(), 0);
    for _ in adjacency {
        graph.add_node(());
    }
    for (from, targets) in adjacency.iter().enumerate() {
        for &to in targets {
            graph.add_edge(NodeIndex::new(from), NodeIndex::new(to), ());
        }
    }
    petgraph::algo::tarjan_scc(&graph)
        .into_iter()
        .map(|component| component.into_iter().map(NodeIndex::index).collect())
        .collect()
}

/// Nodes ordered by descending score, ties by ascending id.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedNodes {
    pub order: Vec<NodeId>,
    pub scores: Vec<f64>,
}

impl RankedNodes {
    fn from_scores(scores: Vec<f64>) -> Self {
        let mut order: Vec<NodeId> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        Self { order, scores }
    }

    /// Members of `subset` in rank order.
    pub fn restricted_to(&self, subset: &NodeIdSet) -> Vec<NodeId> {
        self.order
            .iter()
            .copied()
            .filter(|&v| subset.contains(v))
            .collect()
    }
}

/// PageRank over the heuristic graph of `fbas`.
pub fn rank_nodes(fbas: &Fbas, damping: f64) -> RankedNodes {
    RankedNodes::from_scores(pagerank(&fbas.heuristic_graph(), damping))
}

/// Power-iteration PageRank. Dangling nodes spread their score uniformly.
/// Stops once no score moves by more than 1e-12, or after 1000 rounds.
///
/// Without damping (`damping == 1`), plain power iteration oscillates on
/// periodic graphs, so each round then averages the new scores with the old
/// ones. That lazy walk has the same stationary distribution.
pub fn pagerank(adjacency: &[Vec<NodeId>], damping: f64) -> Vec<f64> {
    let lazy = damping >= 1.0;
    let n = adjacency.len();
    if n == 0 {
        return vec![];
    }
    let uniform = 1.0 / n as f64;
    let mut scores = vec![uniform; n];
    let mut next = vec![0.0; n];
    for _ in 0..PAGERANK_MAX_ROUNDS {
        let dangling: f64 = adjacency
            .iter()
            .zip(&scores)
            .filter(|(targets, _)| targets.is_empty())
            .map(|(_, score)| score)
            .sum();
        let base = (1.0 - damping) * uniform + damping * dangling * uniform;
        next.iter_mut().for_each(|s| *s = base);
        for (from, targets) in adjacency.iter().enumerate() {
            if targets.is_empty() {
                continue;
            }
            let share = damping * scores[from] / targets.len() as f64;
            for &to in targets {
                next[to] += share;
            }
        }
        if lazy {
            next.iter_mut()
                .zip(&scores)
                .for_each(|(n, s)| *n = 0.5 * (*n + s));
        }
        let delta = scores
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut scores, &mut next);
        if delta < PAGERANK_TOLERANCE {
            break;
        }
    }
    scores
}

/// Nodes sharing one quorum set that mentions exactly those nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricCluster {
    pub members: NodeIdSet,
    pub shared_quorum_set: QuorumSet,
}

/// Groups nodes by structurally equal quorum sets and keeps each group whose
/// quorum set mentions exactly the group. Ordered by smallest member.
pub fn find_symmetric_clusters(fbas: &Fbas) -> Vec<SymmetricCluster> {
    let mut groups: BTreeMap<QuorumSet, NodeIdSet> = BTreeMap::new();
    for node in 0..fbas.len() {
        groups
            .entry(fbas.quorum_set(node).standard_form())
            .or_default()
            .insert(node);
    }
    let mut clusters: Vec<SymmetricCluster> = groups
        .into_iter()
        .filter(|(qset, members)| &qset.contained_nodes() == members)
        .map(|(shared_quorum_set, members)| SymmetricCluster {
            members,
            shared_quorum_set,
        })
        .collect();
    clusters.sort_by(|a, b| a.members.cmp(&b.members));
    clusters
}

/// Groups of interchangeable nodes: each group is the validator list of
/// some quorum set, its members share one quorum set, and they are never
/// mentioned anywhere except as exactly that validator list. Permuting a
/// group maps the FBAS onto itself, so every family of minimal sets is closed
/// under such permutations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymmetricNodes {
    groups: Vec<NodeIdSet>,
    /// Per group, the largest threshold of any quorum set listing it (at
    /// least 1). A minimal quorum never holds more members than that:
    /// dropping one leaves every listing satisfied.
    quorum_caps: Vec<usize>,
}

impl SymmetricNodes {
    /// Groups of at least two nodes, all inside `within`.
    pub fn find(fbas: &Fbas, within: &NodeIdSet) -> Self {
        // For every node, the distinct validator lists it appears in.
        let mut lists: Vec<Vec<&[NodeId]>> = vec![vec![]; fbas.len()];
        fn walk<'a>(qset: &'a QuorumSet, lists: &mut Vec<Vec<&'a [NodeId]>>) {
            for &v in qset.validators() {
                if !lists[v].contains(&qset.validators()) {
                    lists[v].push(qset.validators());
                }
            }
            for inner in qset.inner_quorum_sets() {
                walk(inner, lists);
            }
        }
        fn max_thresholds<'a>(qset: &'a QuorumSet, caps: &mut HashMap<&'a [NodeId], usize>) {
            let cap = caps.entry(qset.validators()).or_insert(1);
            *cap = (*cap).max(qset.threshold());
            for inner in qset.inner_quorum_sets() {
                max_thresholds(inner, caps);
            }
        }
        let mut caps = HashMap::new();
        for node in fbas.nodes() {
            walk(&node.quorum_set, &mut lists);
            max_thresholds(&node.quorum_set, &mut caps);
        }
        let mut groups: Vec<NodeIdSet> = vec![];
        let mut quorum_caps = vec![];
        for node in within.iter() {
            let [list] = lists[node].as_slice() else {
                continue;
            };
            if list.len() < 2 || list[0] != node {
                continue;
            }
            let shared = fbas.quorum_set(node).standard_form();
            let interchangeable = list.iter().all(|&member| {
                within.contains(member)
                    && lists[member].len() == 1
                    && fbas.quorum_set(member).standard_form() == shared
            });
            if interchangeable {
                groups.push(list.iter().copied().collect());
                quorum_caps.push(caps[list]);
            }
        }
        Self {
            groups,
            quorum_caps,
        }
    }

    pub fn groups(&self) -> &[NodeIdSet] {
        &self.groups
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// For each position of `order`, the group member visited just before it
    /// (if any) and the group members visited after it.
    pub(crate) fn chain(&self, order: &[NodeId]) -> SymmetryChain {
        let position: HashMap<NodeId, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut previous = vec![None; order.len()];
        let mut later = vec![NodeIdSet::new(); order.len()];
        let mut within_quorum_cap = vec![true; order.len()];
        for (group, &cap) in self.groups.iter().zip(&self.quorum_caps) {
            let mut members: Vec<usize> = group
                .iter()
                .filter_map(|v| position.get(&v).copied())
                .collect();
            members.sort_unstable();
            for (k, &i) in members.iter().enumerate() {
                if k > 0 {
                    previous[i] = Some(order[members[k - 1]]);
                }
                later[i] = members[k + 1..].iter().map(|&j| order[j]).collect();
                within_quorum_cap[i] = k < cap;
            }
        }
        SymmetryChain {
            previous,
            later,
            within_quorum_cap,
        }
    }

    /// Every image of the given sets under permutations of the groups. For
    /// each group, a set holding `k` of its members is replaced by all sets
    /// holding some `k` members instead.
    pub fn expand(&self, sets: impl IntoIterator<Item = NodeIdSet>) -> Vec<NodeIdSet> {
        let mut expanded = vec![];
        for set in sets {
            let mut images = vec![set];
            for group in &self.groups {
                let k = images[0].intersection_len(group);
                if k == 0 || k == group.len() {
                    continue;
                }
                let members: Vec<NodeId> = group.iter().collect();
                let choices = k_subsets(&members, k);
                images = images
                    .into_iter()
                    .flat_map(|image| {
                        let base = image.difference(group);
                        choices.iter().map(move |choice| base.union(choice))
                    })
                    .collect();
            }
            expanded.extend(images);
        }
        expanded
    }
}

fn k_subsets(items: &[NodeId], k: usize) -> Vec<NodeIdSet> {
    if k == 0 {
        return vec![NodeIdSet::new()];
    }
    let Some((&first, rest)) = items.split_first() else {
        return vec![];
    };
    let mut with_first = k_subsets(rest, k - 1);
    for set in &mut with_first {
        set.insert(first);
    }
    with_first.extend(k_subsets(rest, k));
    with_first
}

/// Canonical-order constraints for a branching order: a group member may
/// only join a candidate set after all group members visited before it.
pub(crate) struct SymmetryChain {
    previous: Vec<Option<NodeId>>,
    later: Vec<NodeIdSet>,
    within_quorum_cap: Vec<bool>,
}

impl SymmetryChain {
    /// The node at `position` may be added to `selection`.
    pub(crate) fn allows(&self, position: usize, selection: &NodeIdSet) -> bool {
        self.previous[position].is_none_or(|p| selection.contains(p))
    }

    /// A canonical minimal quorum may contain the node at `position`.
    pub(crate) fn fits_minimal_quorum(&self, position: usize) -> bool {
        self.within_quorum_cap[position]
    }

    /// Nodes that can no longer join once the node at `position` is skipped.
    pub(crate) fn excluded_with(&self, position: usize) -> &NodeIdSet {
        &self.later[position]
    }
}

/// Strongly connected components that contain at least one quorum. Every
/// minimal quorum lies inside exactly one of them.
pub fn relevant_components(fbas: &Fbas) -> Vec<NodeIdSet> {
    strongly_connected_components(fbas)
        .into_iter()
        .filter(|component| fbas.contains_quorum(component))
        .collect()
}

/// Union of [`relevant_components`].
pub fn reduce_to_relevant(fbas: &Fbas) -> NodeIdSet {
    let mut relevant = NodeIdSet::new();
    for component in relevant_components(fbas) {
        relevant.union_with(&component);
    }
    relevant
}
