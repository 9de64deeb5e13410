//! Closed-form enumeration for FBASs whose top tier is one symmetric cluster.
//!
//! With every top-tier node sharing the quorum set `D`, minimal quorums,
//! blocking sets and splitting sets are built directly from `D` by choosing
//! combinations of its members and taking Cartesian products of the choices
//! made inside nested quorum sets. No candidate set is ever checked.

use crate::analysis::{reduce_to_minimal_sets, AnalysisResult};
use crate::error::{Error, Result};
use crate::fbas::{Fbas, QuorumSet};
use crate::node_set::NodeIdSet;
use crate::preprocess::SymmetricCluster;

/// Analyzes `fbas` through its symmetric top tier `cluster`.
///
/// Fails if some quorum exists outside the cluster, if the shared quorum set
/// mentions a node more than once, or if it contains a zero threshold.
pub fn symmetric_top_tier_analysis(
    cluster: &SymmetricCluster,
    fbas: &Fbas,
) -> Result<AnalysisResult> {
    let qset = &cluster.shared_quorum_set;
    let outside = fbas.all_nodes().difference(&cluster.members);
    if fbas.contains_quorum(&outside) {
        return Err(Error::NotSymmetricTopTier(
            "a quorum exists outside the cluster".into(),
        ));
    }
    if !qset.has_distinct_members() {
        return Err(Error::NotSymmetricTopTier(
            "shared quorum set mentions a node more than once".into(),
        ));
    }
    if qset.has_zero_threshold() {
        return Err(Error::NotSymmetricTopTier(
            "shared quorum set has a zero threshold".into(),
        ));
    }

    let minimal_quorums = reduce_to_minimal_sets(satisfying_sets(qset).into());
    if minimal_quorums.is_empty() {
        return Ok(AnalysisResult::without_quorums());
    }
    let minimal_splitting_sets = reduce_to_minimal_sets(splitting_sets(qset).into());
    Ok(AnalysisResult {
        has_quorum_intersection: !minimal_splitting_sets.is_empty_set_only(),
        top_tier: minimal_quorums.union(),
        minimal_blocking_sets: reduce_to_minimal_sets(blocking_sets(qset).into()),
        minimal_splitting_sets,
        minimal_quorums,
        warnings: vec![],
    })
}

/// One element of a quorum set: a validator or an inner quorum set.
enum Member<'a> {
    Validator(usize),
    Inner(&'a QuorumSet),
}

fn members(qset: &QuorumSet) -> Vec<Member<'_>> {
    qset.validators()
        .iter()
        .map(|&v| Member::Validator(v))
        .chain(qset.inner_quorum_sets().iter().map(Member::Inner))
        .collect()
}

/// Minimal sets satisfying `qset`: any `t` members, each satisfied minimally.
fn satisfying_sets(qset: &QuorumSet) -> Vec<NodeIdSet> {
    let members = members(qset);
    let per_member: Vec<Vec<NodeIdSet>> = members
        .iter()
        .map(|m| match m {
            Member::Validator(v) => vec![NodeIdSet::singleton(*v)],
            Member::Inner(inner) => satisfying_sets(inner),
        })
        .collect();
    choose_and_combine(&per_member, qset.threshold())
}

/// Minimal sets leaving `qset` unsatisfiable: block `m - t + 1` members.
fn blocking_sets(qset: &QuorumSet) -> Vec<NodeIdSet> {
    let members = members(qset);
    let Some(needed) = (members.len() + 1).checked_sub(qset.threshold()) else {
        return vec![NodeIdSet::new()];
    };
    let per_member: Vec<Vec<NodeIdSet>> = members
        .iter()
        .map(|m| match m {
            Member::Validator(v) => vec![NodeIdSet::singleton(*v)],
            Member::Inner(inner) => blocking_sets(inner),
        })
        .collect();
    choose_and_combine(&per_member, needed)
}

/// Minimal overlaps of two satisfying sets: two choices of `t` out of `m`
/// members share at least `2t - m` of them, and each shared member
/// contributes one of its own minimal overlaps.
fn splitting_sets(qset: &QuorumSet) -> Vec<NodeIdSet> {
    let members: Vec<Member> = members(qset)
        .into_iter()
        .filter(|m| match m {
            Member::Validator(_) => true,
            Member::Inner(inner) => inner.is_satisfiable(),
        })
        .collect();
    if qset.threshold() > members.len() {
        return vec![];
    }
    let shared = (2 * qset.threshold()).saturating_sub(members.len());
    let per_member: Vec<Vec<NodeIdSet>> = members
        .iter()
        .map(|m| match m {
            Member::Validator(v) => vec![NodeIdSet::singleton(*v)],
            Member::Inner(inner) => splitting_sets(inner),
        })
        .collect();
    choose_and_combine(&per_member, shared)
}

/// For every `k`-subset of the options lists, the Cartesian product of the
/// chosen lists, each tuple merged by union. Empty lists make that subset
/// contribute nothing.
fn choose_and_combine(options: &[Vec<NodeIdSet>], k: usize) -> Vec<NodeIdSet> {
    let mut result = vec![];
    let mut chosen = Vec::with_capacity(k);
    choose(options, k, 0, &mut chosen, &mut result);
    result
}

fn choose<'a>(
    options: &'a [Vec<NodeIdSet>],
    k: usize,
    start: usize,
    chosen: &mut Vec<&'a [NodeIdSet]>,
    result: &mut Vec<NodeIdSet>,
) {
    if chosen.len() == k {
        product(chosen, NodeIdSet::new(), result);
        return;
    }
    let still_needed = k - chosen.len();
    for index in start..options.len() {
        if options.len() - index < still_needed {
            break;
        }
        chosen.push(&options[index]);
        choose(options, k, index + 1, chosen, result);
        chosen.pop();
    }
}

fn product(lists: &[&[NodeIdSet]], prefix: NodeIdSet, result: &mut Vec<NodeIdSet>) {
    let Some((first, rest)) = lists.split_first() else {
        result.push(prefix);
        return;
    };
    for option in first.iter() {
        product(rest, prefix.union(option), result);
    }
}
