use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::id::StableSymbolId;
use super::kind::{EdgeType, NodeKind};
use super::node::{Edge, GraphNode, SemanticGraphFile, SourceLocation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("node {id} declared as {first_kind} at {first} and as {second_kind} at {second}")]
    ConflictingKind {
        id: StableSymbolId,
        first_kind: NodeKind,
        first: String,
        second_kind: NodeKind,
        second: String,
    },
    #[error("node {id} declared at two locations: {first} and {second}")]
    ConflictingLocation {
        id: StableSymbolId,
        first: String,
        second: String,
    },
}

fn describe(loc: &Option<SourceLocation>) -> String {
    match loc {
        Some(l) => format!("{}:{}:{}", l.uri, l.start_line, l.start_character),
        None => "<no location>".to_string(),
    }
}

/// A resolved edge: `graph.node(from).edges[edge]` points at `graph.node(to)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub from: usize,
    pub to: usize,
    pub edge: usize,
}

/// An edge whose target id is not declared by any node in the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DanglingRef {
    pub from: StableSymbolId,
    pub edge: usize,
    pub to: StableSymbolId,
    pub edge_type: EdgeType,
}

/// Immutable project graph. Nodes are kept sorted by id, which makes every
/// traversal order independent of how the inputs were enumerated.
#[derive(Debug, Clone, Default)]
pub struct SemanticCodeGraph {
    nodes: Vec<GraphNode>,
    index: HashMap<StableSymbolId, usize>,
    out_edges: Vec<Vec<EdgeRef>>,
    in_edges: Vec<Vec<EdgeRef>>,
    dangling: Vec<DanglingRef>,
    edge_count: usize,
}

impl SemanticCodeGraph {
    /// Merges per-file graphs into one project graph.
    ///
    /// A node id seen in several files is merged when kind and location
    /// agree; edges identical to an existing one are not repeated.
    pub fn assemble<I>(files: I) -> Result<Self, AssemblyError>
    where
        I: IntoIterator<Item = SemanticGraphFile>,
    {
        let mut files: Vec<SemanticGraphFile> = files.into_iter().collect();
        files.sort_by(|a, b| {
            a.uri.cmp(&b.uri).then_with(|| {
                let ka = a.nodes.iter().map(|n| n.id.as_str());
                let kb = b.nodes.iter().map(|n| n.id.as_str());
                ka.cmp(kb)
            })
        });
        let nodes = files.into_iter().flat_map(|f| f.nodes);
        Self::from_nodes(nodes)
    }

    pub fn from_nodes<I>(nodes: I) -> Result<Self, AssemblyError>
    where
        I: IntoIterator<Item = GraphNode>,
    {
        let mut merged: BTreeMap<StableSymbolId, GraphNode> = BTreeMap::new();
        for node in nodes {
            match merged.get_mut(&node.id) {
                None => {
                    merged.insert(node.id.clone(), node);
                }
                Some(existing) => merge_into(existing, node)?,
            }
        }
        Ok(Self::index(merged.into_values().collect()))
    }

    fn index(nodes: Vec<GraphNode>) -> Self {
        let index: HashMap<StableSymbolId, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i))
            .collect();
        let mut out_edges = vec![Vec::new(); nodes.len()];
        let mut in_edges = vec![Vec::new(); nodes.len()];
        let mut dangling = Vec::new();
        let mut edge_count = 0;
        for (from, node) in nodes.iter().enumerate() {
            for (e, edge) in node.edges.iter().enumerate() {
                match index.get(edge.to.as_str()) {
                    Some(&to) => {
                        let r = EdgeRef { from, to, edge: e };
                        out_edges[from].push(r);
                        in_edges[to].push(r);
                        edge_count += 1;
                    }
                    None => dangling.push(DanglingRef {
                        from: node.id.clone(),
                        edge: e,
                        to: edge.to.clone(),
                        edge_type: edge.edge_type.clone(),
                    }),
                }
            }
        }
        SemanticCodeGraph {
            nodes,
            index,
            out_edges,
            in_edges,
            dangling,
            edge_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of resolved edges, counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &GraphNode {
        &self.nodes[index]
    }

    pub fn get(&self, id: &str) -> Option<&GraphNode> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn out_edges(&self, node: usize) -> &[EdgeRef] {
        &self.out_edges[node]
    }

    pub fn in_edges(&self, node: usize) -> &[EdgeRef] {
        &self.in_edges[node]
    }

    pub fn out_edges_of<'a>(
        &'a self,
        node: usize,
        ty: &'a EdgeType,
    ) -> impl Iterator<Item = EdgeRef> + 'a {
        self.out_edges[node]
            .iter()
            .copied()
            .filter(move |r| self.edge(*r).edge_type == *ty)
    }

    pub fn in_edges_of<'a>(
        &'a self,
        node: usize,
        ty: &'a EdgeType,
    ) -> impl Iterator<Item = EdgeRef> + 'a {
        self.in_edges[node]
            .iter()
            .copied()
            .filter(move |r| self.edge(*r).edge_type == *ty)
    }

    pub fn edge(&self, r: EdgeRef) -> &Edge {
        &self.nodes[r.from].edges[r.edge]
    }

    /// All resolved edges in (source id, declaration order) order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.out_edges.iter().flatten().copied()
    }

    pub fn dangling(&self) -> &[DanglingRef] {
        &self.dangling
    }

    /// Total edges including dangling ones.
    pub fn raw_edge_count(&self) -> usize {
        self.edge_count + self.dangling.len()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.in_edges[node].len()
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_edges[node].len()
    }

    /// Groups nodes back into per-file records, in id order within a file.
    pub fn to_files(&self) -> Vec<SemanticGraphFile> {
        let mut by_uri: BTreeMap<String, Vec<GraphNode>> = BTreeMap::new();
        for n in &self.nodes {
            let uri = n
                .location
                .as_ref()
                .map(|l| l.uri.clone())
                .unwrap_or_default();
            by_uri.entry(uri).or_default().push(n.clone());
        }
        by_uri
            .into_iter()
            .map(|(uri, nodes)| SemanticGraphFile { uri, nodes })
            .collect()
    }
}

fn merge_into(existing: &mut GraphNode, node: GraphNode) -> Result<(), AssemblyError> {
    if existing.kind != node.kind {
        return Err(AssemblyError::ConflictingKind {
            id: node.id,
            first_kind: existing.kind.clone(),
            first: describe(&existing.location),
            second_kind: node.kind,
            second: describe(&node.location),
        });
    }
    if existing.location != node.location {
        return Err(AssemblyError::ConflictingLocation {
            first: describe(&existing.location),
            second: describe(&node.location),
            id: node.id,
        });
    }
    for (k, v) in node.properties {
        existing.properties.entry(k).or_insert(v);
    }
    for edge in node.edges {
        if !existing.edges.contains(&edge) {
            existing.edges.push(edge);
        }
    }
    Ok(())
}
