use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fbas::{Fbas, QuorumSet};
use crate::qsc::relaxed_bft_threshold;

/// `m` nodes that all use `(V, ∅, relaxed_bft_threshold(m))`.
pub fn generate_flat_topology(m: usize) -> Result<Fbas> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "topology needs at least one node".into(),
        ));
    }
    Fbas::from_quorum_sets(vec![QuorumSet::flat(0..m, relaxed_bft_threshold(m)); m])
}

/// `orgs` organizations of three nodes each. Every organization is a 2-of-3
/// inner quorum set and every node requires a relaxed-BFT threshold of
/// organizations.
pub fn generate_stellar_like_topology(orgs: usize) -> Result<Fbas> {
    if orgs == 0 {
        return Err(Error::InvalidArgument(
            "topology needs at least one organization".into(),
        ));
    }
    let inner: Vec<QuorumSet> = (0..orgs)
        .map(|i| QuorumSet::flat(3 * i..3 * i + 3, 2))
        .collect();
    let shared = QuorumSet::new(vec![], inner, relaxed_bft_threshold(orgs));
    Fbas::from_quorum_sets(vec![shared; 3 * orgs])
}

/// A random FBAS of `n` nodes, reproducible from `seed`. With `nested`,
/// quorum sets may contain up to two levels of inner quorum sets.
///
/// Thresholds range up to one above the member count, so unsatisfiable
/// quorum sets occur as well.
pub fn generate_random_fbas(n: usize, nested: bool, seed: u64) -> Result<Fbas> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "population must not be empty".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = if nested { 2 } else { 0 };
    let quorum_sets = (0..n)
        .map(|_| random_quorum_set(&mut rng, n, depth))
        .collect();
    Fbas::from_quorum_sets(quorum_sets)
}

fn random_quorum_set(rng: &mut impl Rng, n: usize, depth: usize) -> QuorumSet {
    let validators: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let inner_count = if depth > 0 { rng.gen_range(0..=2) } else { 0 };
    let inner: Vec<QuorumSet> = (0..inner_count)
        .map(|_| random_quorum_set(rng, n, depth - 1))
        .collect();
    let members = validators.len() + inner.len();
    let threshold = if members == 0 {
        1
    } else if rng.gen_bool(0.05) {
        members + 1
    } else {
        rng.gen_range(1..=members)
    };
    QuorumSet::new(validators, inner, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::find_minimal_quorums;
    use crate::node_set;
    use crate::node_set::NodeSetFamily;

    #[test]
    fn flat_examples() {
        let single = generate_flat_topology(1).unwrap();
        assert_eq!(find_minimal_quorums(&single), vec![node_set![0]].into());
        assert!(generate_flat_topology(0).is_err());
        assert_eq!(
            generate_flat_topology(7).unwrap().quorum_set(3).threshold(),
            5
        );
    }

    #[test]
    fn stellar_like_examples() {
        let one = generate_stellar_like_topology(1).unwrap();
        assert_eq!(one.len(), 3);
        let expected: NodeSetFamily =
            vec![node_set![0, 1], node_set![0, 2], node_set![1, 2]].into();
        assert_eq!(find_minimal_quorums(&one), expected);

        let two = generate_stellar_like_topology(2).unwrap();
        assert_eq!(two.len(), 6);
        assert_eq!(two.quorum_set(0).inner_quorum_sets().len(), 2);
        assert_eq!(two.quorum_set(0).threshold(), 2);
        let quorums = find_minimal_quorums(&two);
        assert_eq!(quorums.len(), 9);
        for q in &quorums {
            assert_eq!(q.iter().filter(|&v| v < 3).count(), 2);
            assert_eq!(q.iter().filter(|&v| v >= 3).count(), 2);
        }
        assert!(generate_stellar_like_topology(0).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(
            generate_random_fbas(6, true, 42).unwrap(),
            generate_random_fbas(6, true, 42).unwrap()
        );
        assert!(generate_random_fbas(0, false, 1).is_err());
    }
}
