//! Node and organization documents in the stellarbeat JSON layout.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbas::{Fbas, Grouping, Node, QuorumSet};
use crate::node_set::NodeId;

#[derive(Debug, Deserialize, Serialize)]
#[serde(rename_all = "camelCase")]
struct RawNode {
    public_key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quorum_set: Option<RawQuorumSet>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(rename_all = "camelCase")]
struct RawQuorumSet {
    threshold: usize,
    #[serde(default)]
    validators: Vec<String>,
    #[serde(default)]
    inner_quorum_sets: Vec<RawQuorumSet>,
}

#[derive(Debug, Deserialize)]
struct RawOrganization {
    id: String,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    validators: Vec<String>,
}

/// Resolves public keys to dense ids, appending unknown keys as extra nodes.
struct Resolver {
    ids: HashMap<String, NodeId>,
    extra: Vec<String>,
    known: usize,
}

impl Resolver {
    fn resolve(&mut self, key: &str) -> NodeId {
        if let Some(&id) = self.ids.get(key) {
            return id;
        }
        let id = self.known + self.extra.len();
        log::warn!("quorum sets reference unknown node `{key}`; adding it as unsatisfiable");
        self.ids.insert(key.to_owned(), id);
        self.extra.push(key.to_owned());
        id
    }

    fn quorum_set(&mut self, raw: &RawQuorumSet) -> QuorumSet {
        let validators = raw.validators.iter().map(|key| self.resolve(key)).collect();
        let inner = raw
            .inner_quorum_sets
            .iter()
            .map(|inner| self.quorum_set(inner))
            .collect();
        QuorumSet::new(validators, inner, raw.threshold)
    }
}

/// Parses a JSON array of `{publicKey, quorumSet}` records.
///
/// Node ids follow document order. Identifiers referenced in quorum sets but
/// missing from the document become extra nodes with unsatisfiable quorum
/// sets, as do records without a quorum set.
pub fn parse_nodes(json: &str) -> Result<Fbas> {
    let raw: Vec<RawNode> = serde_json::from_str(json)?;
    let mut resolver = Resolver {
        ids: HashMap::with_capacity(raw.len()),
        extra: vec![],
        known: raw.len(),
    };
    for (id, node) in raw.iter().enumerate() {
        if resolver.ids.insert(node.public_key.clone(), id).is_some() {
            return Err(Error::DuplicatePublicKey(node.public_key.clone()));
        }
    }
    let mut nodes: Vec<Node> = raw
        .iter()
        .map(|node| {
            let quorum_set = match &node.quorum_set {
                Some(qset) => resolver.quorum_set(qset),
                None => QuorumSet::unsatisfiable(),
            };
            if quorum_set.has_zero_threshold() {
                log::warn!("quorum set of `{}` has a zero threshold", node.public_key);
            }
            Node {
                public_key: node.public_key.clone(),
                quorum_set,
            }
        })
        .collect();
    nodes.extend(resolver.extra.into_iter().map(|public_key| Node {
        public_key,
        quorum_set: QuorumSet::unsatisfiable(),
    }));
    Fbas::new(nodes)
}

fn raw_quorum_set(fbas: &Fbas, qset: &QuorumSet) -> RawQuorumSet {
    RawQuorumSet {
        threshold: qset.threshold(),
        validators: qset
            .validators()
            .iter()
            .map(|&v| fbas.public_key(v).to_owned())
            .collect(),
        inner_quorum_sets: qset
            .inner_quorum_sets()
            .iter()
            .map(|inner| raw_quorum_set(fbas, inner))
            .collect(),
    }
}

/// Serializes `fbas` in the layout accepted by [`parse_nodes`].
pub fn emit_nodes(fbas: &Fbas) -> String {
    let raw: Vec<RawNode> = fbas
        .nodes()
        .iter()
        .map(|node| RawNode {
            public_key: node.public_key.clone(),
            quorum_set: Some(raw_quorum_set(fbas, &node.quorum_set)),
        })
        .collect();
    serde_json::to_string_pretty(&raw).expect("node documents always serialize")
}

/// Parses a JSON array of `{id, name, validators}` records into groupings
/// over `fbas`. Validators unknown to `fbas` are skipped; a validator listed
/// by two organizations is an error.
pub fn parse_organizations(json: &str, fbas: &Fbas) -> Result<Vec<Grouping>> {
    let raw: Vec<RawOrganization> = serde_json::from_str(json)?;
    let mut claimed: HashMap<NodeId, String> = HashMap::new();
    let mut groupings = Vec::with_capacity(raw.len());
    for org in raw {
        let name = org.name.unwrap_or_else(|| org.id.clone());
        let mut grouping = Grouping {
            name,
            members: Default::default(),
        };
        for key in &org.validators {
            let Some(node) = fbas.node_id(key) else {
                log::debug!("organization `{}` lists unknown validator `{key}`", org.id);
                continue;
            };
            if let Some(first) = claimed.insert(node, grouping.name.clone()) {
                return Err(Error::OverlappingGroupings {
                    node: key.clone(),
                    first,
                    second: grouping.name,
                });
            }
            grouping.members.insert(node);
        }
        groupings.push(grouping);
    }
    Ok(groupings)
}
