//! CAIDA AS-relationship files (`<as1>|<as2>|<rel>[|<source>]`).
//!
//! `rel = -1` means `as1` is a provider of `as2`; `rel = 0` means the two
//! ASes peer. Lines starting with `#` are comments.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::qsc::TrustGraph;

/// Which directed edges a provider/customer relationship produces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DirectionRule {
    /// Customer and provider trust each other.
    #[default]
    Both,
    /// Only the customer trusts its provider.
    CustomerToProvider,
}

enum Relationship {
    ProviderToCustomer,
    Peering,
}

/// Builds a trust graph whose nodes are labelled by AS number, in order of
/// first appearance.
pub fn parse_as_rel(text: &str, rule: DirectionRule) -> Result<TrustGraph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = vec![];
    let mut links = vec![];
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || Error::MalformedAsRelationship {
            line: number + 1,
            content: line.to_owned(),
        };
        let fields: Vec<&str> = line.split('|').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(malformed());
        }
        let (a, b) = (fields[0].trim(), fields[1].trim());
        if a.is_empty() || b.is_empty() || !a.chars().chain(b.chars()).all(|c| c.is_ascii_digit()) {
            return Err(malformed());
        }
        let relationship = match fields[2].trim() {
            "-1" => Relationship::ProviderToCustomer,
            "0" => Relationship::Peering,
            _ => return Err(malformed()),
        };
        let mut id = |asn: &str| {
            *index.entry(asn.to_owned()).or_insert_with(|| {
                labels.push(asn.to_owned());
                labels.len() - 1
            })
        };
        let (a, b) = (id(a), id(b));
        links.push((a, b, relationship));
    }

    let mut graph = TrustGraph::with_labels(labels);
    for (a, b, relationship) in links {
        match (relationship, rule) {
            (Relationship::Peering, _)
            | (Relationship::ProviderToCustomer, DirectionRule::Both) => graph.add_peering(a, b),
            (Relationship::ProviderToCustomer, DirectionRule::CustomerToProvider) => {
                graph.add_edge(b, a)
            }
        }
    }
    Ok(graph)
}
