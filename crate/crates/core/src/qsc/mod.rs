//! Quorum-set configuration policies: deriving every node's quorum set from
//! a trust graph, plus synthetic topologies for benchmarking.

mod topology;

use std::collections::BTreeSet;

use crate::analysis::{analyze, AnalysisOptions, AnalysisResult};
use crate::error::{Error, Result};
use crate::fbas::{Fbas, Node, QuorumSet};
use crate::node_set::{NodeId, NodeIdSet};
use crate::preprocess::pagerank;

pub use topology::{generate_flat_topology, generate_random_fbas, generate_stellar_like_topology};

/// Smallest threshold `t` such that any `t` of `n` nodes form a quorum that
/// tolerates `floor((n - 1) / 3)` Byzantine members.
pub fn relaxed_bft_threshold(n: usize) -> usize {
    n - n.saturating_sub(1) / 3
}

/// Directed graph over prospective FBAS nodes. Self-loops are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrustGraph {
    labels: Vec<String>,
    edges: BTreeSet<(NodeId, NodeId)>,
}

impl TrustGraph {
    /// Nodes labelled `"0"`, `"1"`, ...
    pub fn new(node_count: usize) -> Self {
        Self::with_labels((0..node_count).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        Self {
            labels,
            edges: BTreeSet::new(),
        }
    }

    /// Every ordered pair of distinct nodes.
    pub fn complete(node_count: usize) -> Self {
        let mut graph = Self::new(node_count);
        for a in 0..node_count {
            for b in 0..node_count {
                graph.add_edge(a, b);
            }
        }
        graph
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn add_edge(&mut self, from: NodeId, to: NodeId) {
        assert!(
            from < self.node_count() && to < self.node_count(),
            "edge outside graph"
        );
        if from != to {
            self.edges.insert((from, to));
        }
    }

    /// Stores an undirected link as two directed edges.
    pub fn add_peering(&mut self, a: NodeId, b: NodeId) {
        self.add_edge(a, b);
        self.add_edge(b, a);
    }

    pub fn outlinks(&self, node: NodeId) -> NodeIdSet {
        self.edges
            .range((node, 0)..=(node, NodeId::MAX))
            .map(|&(_, to)| to)
            .collect()
    }

    fn adjacency(&self) -> Vec<Vec<NodeId>> {
        let mut adjacency = vec![vec![]; self.node_count()];
        for &(from, to) in &self.edges {
            adjacency[from].push(to);
        }
        adjacency
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    /// Every node requires all nodes.
    SuperSafe,
    /// Every node requires a relaxed-BFT threshold of all nodes.
    IdealOpen,
    /// Every node requires a relaxed-BFT threshold of itself and its out-neighbors.
    AllNeighbors,
    /// Like `AllNeighbors`, restricted to neighbors of clearly higher PageRank,
    /// or of comparable PageRank if there are none.
    HigherTierNeighbors,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QscPolicy {
    pub kind: PolicyKind,
    tier_ratio: f64,
}

impl QscPolicy {
    pub const DEFAULT_TIER_RATIO: f64 = 2.0;

    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            tier_ratio: Self::DEFAULT_TIER_RATIO,
        }
    }

    /// Factor by which a neighbor's rank must exceed a node's own rank to
    /// count as higher tier. Must be greater than 1.
    pub fn with_tier_ratio(kind: PolicyKind, tier_ratio: f64) -> Result<Self> {
        if !tier_ratio.is_finite() || tier_ratio <= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "tier ratio must be a finite number greater than 1, got {tier_ratio}"
            )));
        }
        Ok(Self { kind, tier_ratio })
    }

    pub fn tier_ratio(&self) -> f64 {
        self.tier_ratio
    }
}

fn threshold_over(members: NodeIdSet) -> QuorumSet {
    let threshold = relaxed_bft_threshold(members.len());
    QuorumSet::flat(members.iter(), threshold)
}

/// Builds the FBAS that results when every node of `graph` follows `policy`.
pub fn apply_policy(graph: &TrustGraph, policy: &QscPolicy) -> Fbas {
    let n = graph.node_count();
    let quorum_sets: Vec<QuorumSet> = match policy.kind {
        PolicyKind::SuperSafe => vec![QuorumSet::flat(0..n, n); n],
        PolicyKind::IdealOpen => vec![QuorumSet::flat(0..n, relaxed_bft_threshold(n)); n],
        PolicyKind::AllNeighbors => (0..n)
            .map(|v| {
                let mut members = graph.outlinks(v);
                members.insert(v);
                threshold_over(members)
            })
            .collect(),
        PolicyKind::HigherTierNeighbors => {
            let rank = pagerank(&graph.adjacency(), 1.0);
            let ratio = policy.tier_ratio;
            (0..n)
                .map(|v| {
                    let (higher, peers) = tiered_neighbors(graph, &rank, ratio, v);
                    let mut members = if higher.is_empty() { peers } else { higher };
                    members.insert(v);
                    threshold_over(members)
                })
                .collect()
        }
    };
    let nodes = graph
        .labels
        .iter()
        .zip(quorum_sets)
        .map(|(label, quorum_set)| Node {
            public_key: label.clone(),
            quorum_set,
        })
        .collect();
    Fbas::new(nodes).expect("policy output only references graph nodes")
}

/// Out-neighbors ranked at least `ratio` times higher than `node`, and those
/// ranked within a factor of `ratio` either way.
pub fn tiered_neighbors(
    graph: &TrustGraph,
    rank: &[f64],
    ratio: f64,
    node: NodeId,
) -> (NodeIdSet, NodeIdSet) {
    let own = rank[node];
    let mut higher = NodeIdSet::new();
    let mut peers = NodeIdSet::new();
    for neighbor in graph.outlinks(node).iter() {
        let r = rank[neighbor];
        if r >= ratio * own {
            higher.insert(neighbor);
        } else if own / ratio < r && r < ratio * own {
            peers.insert(neighbor);
        }
    }
    (higher, peers)
}

/// Nodes forming a one-node quorum that no other node mentions.
pub fn isolated_self_quorums(fbas: &Fbas) -> NodeIdSet {
    let mut mentioned = NodeIdSet::new();
    for targets in fbas.heuristic_graph() {
        mentioned.extend(targets);
    }
    (0..fbas.len())
        .filter(|&v| !mentioned.contains(v) && fbas.is_quorum(&NodeIdSet::singleton(v)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Simulation {
    /// The induced FBAS after dropping isolated self-quorums.
    pub fbas: Fbas,
    /// Public keys of the dropped nodes.
    pub dropped: Vec<String>,
    pub result: AnalysisResult,
}

/// Applies `policy`, drops isolated one-node quorums, and analyzes the rest.
pub fn simulate_and_analyze(
    graph: &TrustGraph,
    policy: &QscPolicy,
    options: &AnalysisOptions,
) -> Result<Simulation> {
    let induced = apply_policy(graph, policy);
    let isolated = isolated_self_quorums(&induced);
    let dropped = isolated
        .iter()
        .map(|v| induced.public_key(v).to_owned())
        .collect();
    let (fbas, _) = induced.without_nodes(&isolated);
    let result = analyze(&fbas, options)?;
    Ok(Simulation {
        fbas,
        dropped,
        result,
    })
}
