//! Input documents and result serialization.

mod as_rel;
mod nodes;
mod report;

pub use as_rel::{parse_as_rel, DirectionRule};
pub use nodes::{emit_nodes, parse_nodes, parse_organizations};
pub use report::{emit_result, Format};
