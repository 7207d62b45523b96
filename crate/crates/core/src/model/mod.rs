//! Core graph model: node and edge records, stable identifiers, project
//! graph assembly and invariant checks.

mod graph;
mod id;
mod kind;
mod node;
mod validate;

pub use graph::{AssemblyError, DanglingRef, EdgeRef, SemanticCodeGraph};
pub use id::{
    make_stable_id, IdError, StableSymbolId, SymbolKind, CONSTRUCTOR_NAME, EMPTY_PACKAGE,
};
pub use kind::{CcnEdgeType, EdgeType, NodeKind};
pub use node::{props, Edge, GraphNode, Properties, SemanticGraphFile, SourceLocation};
pub use validate::{declaring_edge, validate, Rule, Violation};
