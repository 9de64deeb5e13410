//! Brute-force reference enumerations for small populations.
//!
//! These deliberately share nothing with the search code except
//! [`satisfies`]: candidate sets are plain bitmasks and minimality is decided
//! over a table of all `2^n` subsets.

use crate::error::{Error, Result};
use crate::fbas::{satisfies, Fbas};
use crate::node_set::{NodeIdSet, NodeSetFamily};

/// Largest population the oracles accept.
pub const MAX_POPULATION: usize = 20;

/// How the oracles sweep the `2^n` subsets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the rayon thread pool when the `parallel` feature is enabled and
    /// falls back to sequential execution otherwise.
    #[default]
    Parallel,
}

type Mask = u32;

fn to_set(mask: Mask) -> NodeIdSet {
    (0..Mask::BITS as usize)
        .filter(|&i| mask & (1 << i) != 0)
        .collect()
}

fn check_size(fbas: &Fbas) -> Result<usize> {
    let n = fbas.len();
    if n > MAX_POPULATION {
        return Err(Error::PopulationTooLarge {
            size: n,
            limit: MAX_POPULATION,
        });
    }
    Ok(n)
}

fn is_quorum_mask(fbas: &Fbas, mask: Mask) -> bool {
    let set = to_set(mask);
    mask != 0
        && (0..fbas.len())
            .filter(|&i| mask & (1 << i) != 0)
            .all(|i| satisfies(&set, fbas.quorum_set(i)))
}

/// Minimal elements of the upward closure of `masks`: marks every superset,
/// then keeps marked masks from which no single removal stays marked.
fn minimal_masks(n: usize, masks: impl IntoIterator<Item = Mask>) -> Vec<Mask> {
    let size = 1usize << n;
    let mut marked = vec![false; size];
    for m in masks {
        marked[m as usize] = true;
    }
    for bit in 0..n {
        for m in 0..size {
            if m & (1 << bit) != 0 && marked[m ^ (1 << bit)] {
                marked[m] = true;
            }
        }
    }
    (0..size)
        .filter(|&m| marked[m])
        .filter(|&m| (0..n).all(|bit| m & (1 << bit) == 0 || !marked[m ^ (1 << bit)]))
        .map(|m| m as Mask)
        .collect()
}

fn family(masks: impl IntoIterator<Item = Mask>) -> NodeSetFamily {
    masks.into_iter().map(to_set).collect()
}

fn filter_masks(n: usize, execution: Execution, keep: impl Fn(Mask) -> bool + Sync) -> Vec<Mask> {
    let end: Mask = 1 << n;
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..end).into_par_iter().filter(|&m| keep(m)).collect()
        }
        _ => (0..end).filter(|&m| keep(m)).collect(),
    }
}

fn quorum_masks(fbas: &Fbas, execution: Execution) -> Result<Vec<Mask>> {
    let n = check_size(fbas)?;
    Ok(filter_masks(n, execution, |m| is_quorum_mask(fbas, m)))
}

/// Every quorum, found by testing all subsets.
pub fn brute_quorums(fbas: &Fbas) -> Result<NodeSetFamily> {
    brute_quorums_with(fbas, Execution::default())
}

pub fn brute_quorums_with(fbas: &Fbas, execution: Execution) -> Result<NodeSetFamily> {
    Ok(family(quorum_masks(fbas, execution)?))
}

/// Minimal sets that intersect every quorum.
pub fn brute_blocking_sets(fbas: &Fbas) -> Result<NodeSetFamily> {
    brute_blocking_sets_with(fbas, Execution::default())
}

pub fn brute_blocking_sets_with(fbas: &Fbas, execution: Execution) -> Result<NodeSetFamily> {
    let quorums = quorum_masks(fbas, execution)?;
    let blocking = filter_masks(fbas.len(), execution, |b| {
        quorums.iter().all(|&q| q & b != 0)
    });
    Ok(family(minimal_masks(fbas.len(), blocking)))
}

/// Minimal sets containing the intersection of two (not necessarily
/// distinct) quorums; `{∅}` when two quorums are disjoint.
pub fn brute_splitting_sets(fbas: &Fbas) -> Result<NodeSetFamily> {
    brute_splitting_sets_with(fbas, Execution::default())
}

pub fn brute_splitting_sets_with(fbas: &Fbas, execution: Execution) -> Result<NodeSetFamily> {
    let quorums = quorum_masks(fbas, execution)?;
    let intersections = quorums
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| quorums[i..].iter().map(move |&b| a & b));
    Ok(family(minimal_masks(fbas.len(), intersections)))
}
