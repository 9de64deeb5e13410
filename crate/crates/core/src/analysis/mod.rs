//! Exact enumeration of minimal quorums, blocking sets and splitting sets.

pub mod blocking;
pub mod faulty;
pub mod intersection;
pub mod merge;
pub mod quorums;
pub mod splitting;
pub mod symmetric;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fbas::Fbas;
use crate::node_set::{NodeId, NodeIdSet, NodeSetFamily};
use crate::preprocess::find_symmetric_clusters;

pub use blocking::find_minimal_blocking_sets;
pub use intersection::{has_quorum_intersection_complement, has_quorum_intersection_pairwise};
pub use merge::merge_families_by_group;
pub use quorums::{find_minimal_quorums, find_minimal_quorums_with, for_each_minimal_quorum};
pub use splitting::find_minimal_splitting_sets;
pub use symmetric::symmetric_top_tier_analysis;

/// Keeps exactly the sets that have no proper subset in the family.
pub fn reduce_to_minimal_sets(family: NodeSetFamily) -> NodeSetFamily {
    let mut sets = family.into_vec();
    // Shorter sets first: a set can only be dominated by a strictly shorter one.
    sets.sort_by_key(NodeIdSet::len);
    let mut minimal: Vec<NodeIdSet> = Vec::with_capacity(sets.len());
    let mut shorter = 0;
    for set in sets {
        while shorter < minimal.len() && minimal[shorter].len() < set.len() {
            shorter += 1;
        }
        if !minimal[..shorter].iter().any(|kept| kept.is_subset(&set)) {
            minimal.push(set);
        }
    }
    minimal.into()
}

/// Union of all minimal quorums.
pub fn top_tier(minimal_quorums: &NodeSetFamily) -> NodeIdSet {
    minimal_quorums.union()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IntersectionAlgorithm {
    /// Check all pairs of minimal quorums.
    Pairwise,
    /// Check that no minimal quorum's complement contains a quorum.
    #[default]
    Complement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub intersection: IntersectionAlgorithm,
    /// Use closed forms when the top tier is a single symmetric cluster.
    pub symmetric_shortcuts: bool,
    /// Branch over only one arrangement of interchangeable nodes and expand
    /// the results afterwards.
    pub node_symmetry: bool,
    /// Refuse blocking/splitting enumeration above this top-tier size.
    pub abort_above: Option<usize>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            intersection: IntersectionAlgorithm::default(),
            symmetric_shortcuts: true,
            node_symmetry: true,
            abort_above: Some(40),
        }
    }
}

/// Conditions worth flagging next to an otherwise valid result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// No quorum exists; intersection holds only vacuously.
    NoQuorum,
    /// Some node's quorum set contains a zero threshold.
    ZeroThreshold { node: NodeId },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NoQuorum => write!(f, "no quorum exists; intersection holds vacuously"),
            Warning::ZeroThreshold { node } => {
                write!(f, "quorum set of node {node} has a zero threshold")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisResult {
    pub minimal_quorums: NodeSetFamily,
    pub has_quorum_intersection: bool,
    pub minimal_blocking_sets: NodeSetFamily,
    pub minimal_splitting_sets: NodeSetFamily,
    pub top_tier: NodeIdSet,
    pub warnings: Vec<Warning>,
}

impl AnalysisResult {
    /// Result for an FBAS without any quorum: the empty set blocks
    /// everything and there is nothing to split.
    pub(crate) fn without_quorums() -> Self {
        Self {
            minimal_quorums: NodeSetFamily::new(),
            has_quorum_intersection: true,
            minimal_blocking_sets: NodeSetFamily::with_empty_set(),
            minimal_splitting_sets: NodeSetFamily::new(),
            top_tier: NodeIdSet::new(),
            warnings: vec![Warning::NoQuorum],
        }
    }

    pub fn quorum_stats(&self) -> FamilyStats {
        FamilyStats::of(&self.minimal_quorums)
    }

    pub fn blocking_stats(&self) -> FamilyStats {
        FamilyStats::of(&self.minimal_blocking_sets)
    }

    pub fn splitting_stats(&self) -> FamilyStats {
        FamilyStats::of(&self.minimal_splitting_sets)
    }
}

/// Cardinality statistics of a family of node sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyStats {
    pub count: usize,
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub mean: Option<f64>,
    /// Cardinality → number of sets.
    pub histogram: BTreeMap<usize, usize>,
}

impl FamilyStats {
    pub fn of(family: &NodeSetFamily) -> Self {
        let mut histogram = BTreeMap::new();
        for set in family {
            *histogram.entry(set.len()).or_insert(0) += 1;
        }
        let count = family.len();
        let total: usize = family.iter().map(NodeIdSet::len).sum();
        Self {
            count,
            min: histogram.keys().next().copied(),
            max: histogram.keys().next_back().copied(),
            mean: (count > 0).then(|| total as f64 / count as f64),
            histogram,
        }
    }
}

/// Runs every analysis on `fbas`.
///
/// Fails with [`Error::TopTierTooLarge`] as soon as the minimal quorums found
/// so far span more than `options.abort_above` nodes.
pub fn analyze(fbas: &Fbas, options: &AnalysisOptions) -> Result<AnalysisResult> {
    let warnings: Vec<Warning> = (0..fbas.len())
        .filter(|&node| fbas.quorum_set(node).has_zero_threshold())
        .map(|node| Warning::ZeroThreshold { node })
        .collect();

    if options.symmetric_shortcuts {
        if let Some(mut result) = try_symmetric_shortcut(fbas, options)? {
            result.warnings.extend(warnings);
            return Ok(result);
        }
    }

    let minimal_quorums = collect_minimal_quorums(fbas, options)?;
    if minimal_quorums.is_empty() {
        let mut result = AnalysisResult::without_quorums();
        result.warnings.extend(warnings);
        return Ok(result);
    }
    let top_tier = top_tier(&minimal_quorums);
    log::debug!(
        "{} minimal quorums, top tier of {} nodes",
        minimal_quorums.len(),
        top_tier.len()
    );

    let has_quorum_intersection = match options.intersection {
        IntersectionAlgorithm::Pairwise => intersection::all_pairs_intersect(&minimal_quorums),
        IntersectionAlgorithm::Complement => {
            intersection::has_quorum_intersection_given(fbas, &minimal_quorums)
        }
    };
    let minimal_blocking_sets =
        blocking::find_minimal_blocking_sets_within(fbas, &top_tier, options.node_symmetry);
    let minimal_splitting_sets = if has_quorum_intersection {
        splitting::find_minimal_splitting_sets_given(fbas, &minimal_quorums, options.node_symmetry)
    } else {
        NodeSetFamily::with_empty_set()
    };
    Ok(AnalysisResult {
        minimal_quorums,
        has_quorum_intersection,
        minimal_blocking_sets,
        minimal_splitting_sets,
        top_tier,
        warnings,
    })
}

/// Minimal quorums, giving up as soon as their union outgrows
/// `options.abort_above`.
fn collect_minimal_quorums(fbas: &Fbas, options: &AnalysisOptions) -> Result<NodeSetFamily> {
    let mut found = vec![];
    let mut union = NodeIdSet::new();
    let mut oversized = None;
    let _ = quorums::for_each_minimal_quorum_with(fbas, options.node_symmetry, |quorum| {
        union.union_with(quorum);
        found.push(quorum.clone());
        match check_abort(union.len(), options) {
            Ok(()) => ControlFlow::Continue(()),
            Err(error) => {
                oversized = Some(error);
                ControlFlow::Break(())
            }
        }
    });
    match oversized {
        Some(error) => Err(error),
        None => Ok(found.into()),
    }
}

fn check_abort(top_tier_size: usize, options: &AnalysisOptions) -> Result<()> {
    match options.abort_above {
        Some(limit) if top_tier_size > limit => Err(Error::TopTierTooLarge {
            size: top_tier_size,
            limit,
        }),
        _ => Ok(()),
    }
}

/// Applies the closed forms if exactly one symmetric cluster exists and it
/// qualifies as the top tier.
fn try_symmetric_shortcut(
    fbas: &Fbas,
    options: &AnalysisOptions,
) -> Result<Option<AnalysisResult>> {
    let clusters = find_symmetric_clusters(fbas);
    let [cluster] = clusters.as_slice() else {
        return Ok(None);
    };
    check_abort(cluster.members.len(), options)?;
    match symmetric_top_tier_analysis(cluster, fbas) {
        Ok(result) => {
            log::debug!(
                "top tier is a symmetric cluster of {} nodes",
                cluster.members.len()
            );
            Ok(Some(result))
        }
        Err(Error::NotSymmetricTopTier(reason)) => {
            log::debug!("symmetric shortcut not applicable: {reason}");
            Ok(None)
        }
        Err(other) => Err(other),
    }
}
