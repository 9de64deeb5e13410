//! Exact analysis of Federated Byzantine Agreement Systems.
//!
//! Enumerates minimal quorums, minimal blocking sets and minimal splitting
//! sets of an FBAS, checks quorum intersection, and simulates how quorum-set
//! configuration policies shape an FBAS built from a trust graph.
//!
//! ```
//! use fbas_core::analysis::{analyze, AnalysisOptions};
//! use fbas_core::qsc::generate_flat_topology;
//!
//! let fbas = generate_flat_topology(4).unwrap();
//! let result = analyze(&fbas, &AnalysisOptions::default()).unwrap();
//! assert!(result.has_quorum_intersection);
//! assert_eq!(result.minimal_blocking_sets.len(), 6);
//! ```

pub mod analysis;
pub mod error;
pub mod fbas;
pub mod io;
pub mod node_set;
pub mod oracle;
pub mod preprocess;
pub mod qsc;

pub use error::{Error, Result};
pub use fbas::{satisfies, Fbas, Grouping, Node, QuorumSet};
pub use node_set::{NodeId, NodeIdSet, NodeSetFamily};
