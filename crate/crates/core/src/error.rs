use thiserror::Error;

use crate::NodeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("duplicate public key `{0}`")]
    DuplicatePublicKey(String),

    #[error("quorum set of node {owner} references node {referenced}, but the population has {population} nodes")]
    UnknownNode {
        owner: NodeId,
        referenced: NodeId,
        population: usize,
    },

    #[error("node `{node}` is claimed by both `{first}` and `{second}`")]
    OverlappingGroupings {
        node: String,
        first: String,
        second: String,
    },

    #[error("population of {size} nodes exceeds the brute-force limit of {limit}")]
    PopulationTooLarge { size: usize, limit: usize },

    #[error("line {line}: malformed AS relationship entry `{content}`")]
    MalformedAsRelationship { line: usize, content: String },

    #[error("top tier of at least {size} nodes exceeds the abort threshold of {limit}")]
    TopTierTooLarge { size: usize, limit: usize },

    #[error("not a symmetric top tier: {0}")]
    NotSymmetricTopTier(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
