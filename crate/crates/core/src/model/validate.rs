use std::fmt;

use serde::Serialize;

use super::graph::SemanticCodeGraph;
use super::id::StableSymbolId;
use super::kind::{EdgeType, NodeKind};
use super::node::SourceLocation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    EmptyId,
    MissingLocation,
    EmptyUri,
    NonRelativeUri,
    NegativePosition,
    LocationOrder,
    SelfDeclaration,
    MultipleDeclaringParents,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub node: StableSymbolId,
    /// Index into the node's edge list when the violation is about an edge.
    pub edge: Option<usize>,
    pub detail: String,
}

/// The edge type through which a node of `kind` is owned by its parent.
pub fn declaring_edge(kind: &NodeKind) -> EdgeType {
    match kind {
        NodeKind::Param => EdgeType::Parameter,
        NodeKind::TypeParam => EdgeType::TypeParameter,
        _ => EdgeType::Declaration,
    }
}

fn check_location(loc: &SourceLocation, push: &mut impl FnMut(Rule, String)) {
    if loc.uri.is_empty() {
        push(Rule::EmptyUri, "location uri is empty".into());
    } else if loc.uri.contains('\\') || loc.uri.starts_with('/') {
        push(
            Rule::NonRelativeUri,
            format!("uri {:?} is not a relative /-separated path", loc.uri),
        );
    }
    if !loc.is_non_negative() {
        push(Rule::NegativePosition, "negative line or character".into());
    }
    if !loc.is_ordered() {
        push(
            Rule::LocationOrder,
            format!(
                "end {}:{} precedes start {}:{}",
                loc.end_line, loc.end_character, loc.start_line, loc.start_character
            ),
        );
    }
}

/// Checks the structural invariants of a graph. Violations are returned as
/// data in node order; an empty list means the graph is well formed.
pub fn validate(graph: &SemanticCodeGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, node) in graph.nodes().iter().enumerate() {
        let mut push_node = |rule, detail| {
            out.push(Violation {
                rule,
                node: node.id.clone(),
                edge: None,
                detail,
            })
        };
        if node.id.as_str().is_empty() {
            push_node(Rule::EmptyId, "node id is empty".into());
        }
        match &node.location {
            Some(loc) => check_location(loc, &mut push_node),
            None => push_node(Rule::MissingLocation, "node has no location".into()),
        }

        let declaring = declaring_edge(&node.kind);
        let parents = graph.in_edges_of(i, &declaring).count();
        if parents > 1 {
            push_node(
                Rule::MultipleDeclaringParents,
                format!("{parents} incoming {declaring} edges"),
            );
        }

        for (e, edge) in node.edges.iter().enumerate() {
            let mut push_edge = |rule, detail| {
                out.push(Violation {
                    rule,
                    node: node.id.clone(),
                    edge: Some(e),
                    detail,
                })
            };
            if let Some(loc) = &edge.location {
                check_location(loc, &mut push_edge);
            }
            if edge.edge_type == EdgeType::Declaration && edge.to == node.id {
                push_edge(Rule::SelfDeclaration, "node declares itself".into());
            }
        }
    }
    out
}
