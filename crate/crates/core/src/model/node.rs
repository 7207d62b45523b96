use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::id::StableSymbolId;
use super::kind::{EdgeType, NodeKind};

pub type Properties = BTreeMap<String, String>;

/// Well-known property keys.
pub mod props {
    pub const LOC: &str = "loc";
    pub const IS_LOCAL: &str = "isLocal";
    pub const PACKAGE: &str = "package";
    pub const FILE: &str = "file";
}

/// A zero-based source range inside one file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceLocation {
    pub uri: String,
    pub start_line: i32,
    pub start_character: i32,
    pub end_line: i32,
    pub end_character: i32,
}

impl SourceLocation {
    pub fn new(uri: impl Into<String>, start: (i32, i32), end: (i32, i32)) -> Self {
        SourceLocation {
            uri: uri.into(),
            start_line: start.0,
            start_character: start.1,
            end_line: end.0,
            end_character: end.1,
        }
    }

    pub fn is_ordered(&self) -> bool {
        (self.start_line, self.start_character) <= (self.end_line, self.end_character)
    }

    pub fn is_non_negative(&self) -> bool {
        self.start_line >= 0
            && self.start_character >= 0
            && self.end_line >= 0
            && self.end_character >= 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub to: StableSymbolId,
    #[serde(rename = "type")]
    pub edge_type: EdgeType,
    pub location: Option<SourceLocation>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub properties: Properties,
}

impl Edge {
    pub fn new(
        to: impl Into<StableSymbolId>,
        edge_type: EdgeType,
        location: SourceLocation,
    ) -> Self {
        Edge {
            to: to.into(),
            edge_type,
            location: Some(location),
            properties: Properties::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphNode {
    pub id: StableSymbolId,
    pub kind: NodeKind,
    pub location: Option<SourceLocation>,
    pub display_name: String,
    #[serde(default)]
    pub properties: Properties,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

impl GraphNode {
    pub fn new(
        id: impl Into<StableSymbolId>,
        kind: NodeKind,
        display_name: impl Into<String>,
    ) -> Self {
        GraphNode {
            id: id.into(),
            kind,
            location: None,
            display_name: display_name.into(),
            properties: Properties::new(),
            edges: Vec::new(),
        }
    }

    pub fn with_location(mut self, location: SourceLocation) -> Self {
        self.location = Some(location);
        self
    }

    pub fn with_property(mut self, key: &str, value: impl Into<String>) -> Self {
        self.properties.insert(key.to_string(), value.into());
        self
    }

    pub fn with_edge(mut self, edge: Edge) -> Self {
        self.edges.push(edge);
        self
    }

    /// `loc` property as a number; absent or malformed values read as zero.
    pub fn loc(&self) -> u64 {
        self.properties
            .get(props::LOC)
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(0)
    }

    pub fn property(&self, key: &str) -> Option<&str> {
        self.properties.get(key).map(String::as_str)
    }
}

/// All nodes declared in one source file: the unit of storage.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SemanticGraphFile {
    pub uri: String,
    pub nodes: Vec<GraphNode>,
}

impl SemanticGraphFile {
    pub fn new(uri: impl Into<String>, nodes: Vec<GraphNode>) -> Self {
        SemanticGraphFile {
            uri: uri.into(),
            nodes,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.edges.len()).sum()
    }
}
