//! Read-only reachability queries: search, neighbourhoods, call hierarchies
//! and shortest paths.

use std::collections::{BTreeMap, VecDeque};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::model::{
    EdgeRef, EdgeType, GraphNode, NodeKind, Properties, SemanticCodeGraph, SourceLocation,
};

pub const SEARCH_LIMIT: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("no node with id {0:?}")]
    UnknownNode(String),
    #[error("invalid {name}: {value:?}")]
    InvalidParam { name: &'static str, value: String },
}

/// A node without its edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeView {
    pub id: String,
    pub kind: NodeKind,
    pub display_name: String,
    pub location: Option<SourceLocation>,
    pub properties: Properties,
    pub in_degree: usize,
    pub out_degree: usize,
}

impl NodeView {
    pub fn of(g: &SemanticCodeGraph, i: usize) -> Self {
        let n: &GraphNode = g.node(i);
        NodeView {
            id: n.id.to_string(),
            kind: n.kind.clone(),
            display_name: n.display_name.clone(),
            location: n.location.clone(),
            properties: n.properties.clone(),
            in_degree: g.in_degree(i),
            out_degree: g.out_degree(i),
        }
    }
}

fn index(g: &SemanticCodeGraph, id: &str) -> Result<usize, QueryError> {
    g.index_of(id)
        .ok_or_else(|| QueryError::UnknownNode(id.to_string()))
}

pub fn node(g: &SemanticCodeGraph, id: &str) -> Result<NodeView, QueryError> {
    Ok(NodeView::of(g, index(g, id)?))
}

/// Case-insensitive substring search over display names and ids. Exact
/// display-name matches come first, then prefix matches, then the rest;
/// each group in id order.
pub fn search(g: &SemanticCodeGraph, q: &str, limit: usize) -> Vec<NodeView> {
    let q = q.to_lowercase();
    let mut hits: Vec<(u8, &str, usize)> = (0..g.node_count())
        .filter_map(|i| {
            let n = g.node(i);
            let name = n.display_name.to_lowercase();
            let rank = if name == q {
                0
            } else if name.starts_with(&q) {
                1
            } else if name.contains(&q) || n.id.as_str().to_lowercase().contains(&q) {
                2
            } else {
                return None;
            };
            Some((rank, n.id.as_str(), i))
        })
        .collect();
    hits.sort();
    hits.into_iter()
        .take(limit)
        .map(|(_, _, i)| NodeView::of(g, i))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

impl FromStr for Direction {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "in" | "callers" => Ok(Direction::In),
            "out" | "callees" => Ok(Direction::Out),
            _ => Err(QueryError::InvalidParam {
                name: "direction",
                value: s.to_string(),
            }),
        }
    }
}

/// Parses a comma-separated edge type list; empty means "all types".
pub fn parse_edge_types(csv: &str) -> Result<Vec<EdgeType>, QueryError> {
    csv.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let upper = s.to_ascii_uppercase();
            match EdgeType::from(upper.as_str()) {
                EdgeType::Other(_) => Err(QueryError::InvalidParam {
                    name: "types",
                    value: s.to_string(),
                }),
                t => Ok(t),
            }
        })
        .collect()
}

fn step(
    g: &SemanticCodeGraph,
    v: usize,
    dir: Direction,
) -> impl Iterator<Item = (EdgeRef, usize)> + '_ {
    let refs = match dir {
        Direction::Out => g.out_edges(v),
        Direction::In => g.in_edges(v),
    };
    refs.iter()
        .map(move |&r| (r, if dir == Direction::Out { r.to } else { r.from }))
}

/// All parallel edges of one type between a node and one neighbour.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Neighbor {
    pub node: NodeView,
    pub edge_type: EdgeType,
    pub multiplicity: usize,
    pub locations: Vec<SourceLocation>,
}

/// Neighbours of `id`, one entry per (neighbour, edge type), ordered by
/// neighbour id and type.
pub fn neighbors(
    g: &SemanticCodeGraph,
    id: &str,
    dir: Direction,
    types: &[EdgeType],
    limit: usize,
) -> Result<Vec<Neighbor>, QueryError> {
    let v = index(g, id)?;
    let mut grouped: BTreeMap<(&str, &EdgeType), (usize, Vec<SourceLocation>)> = BTreeMap::new();
    for (r, u) in step(g, v, dir) {
        let e = g.edge(r);
        if !types.is_empty() && !types.contains(&e.edge_type) {
            continue;
        }
        let slot = grouped
            .entry((g.node(u).id.as_str(), &e.edge_type))
            .or_default();
        slot.0 += 1;
        slot.1.extend(e.location.clone());
    }
    Ok(grouped
        .into_iter()
        .take(limit)
        .map(|((nid, ty), (multiplicity, locations))| Neighbor {
            node: NodeView::of(g, g.index_of(nid).expect("neighbour is in the graph")),
            edge_type: ty.clone(),
            multiplicity,
            locations,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HierarchyNode {
    pub node: NodeView,
    /// Location of the edge that led here from the parent.
    pub via: Option<SourceLocation>,
    /// Set when the node was already expanded elsewhere in the tree.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub repeated: bool,
    pub children: Vec<HierarchyNode>,
}

/// Tree of nodes reachable from `root` along `edge` edges in `dir`, up to
/// `depth` levels. Each node is expanded once, at its shallowest level;
/// later sightings appear as leaves marked `repeated`.
pub fn hierarchy(
    g: &SemanticCodeGraph,
    root: &str,
    edge: &EdgeType,
    dir: Direction,
    depth: usize,
) -> Result<HierarchyNode, QueryError> {
    struct Slot {
        node: usize,
        via: Option<SourceLocation>,
        repeated: bool,
        children: Vec<usize>,
    }
    let r = index(g, root)?;
    let mut arena = vec![Slot {
        node: r,
        via: None,
        repeated: false,
        children: Vec::new(),
    }];
    let mut expanded = vec![false; g.node_count()];
    expanded[r] = true;
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((slot, level)) = queue.pop_front() {
        if level == depth || arena[slot].repeated {
            continue;
        }
        let v = arena[slot].node;
        let mut seen_here = Vec::new();
        for (er, u) in step(g, v, dir) {
            let e = g.edge(er);
            if e.edge_type != *edge || seen_here.contains(&u) {
                continue;
            }
            seen_here.push(u);
            let repeated = expanded[u];
            expanded[u] = true;
            arena.push(Slot {
                node: u,
                via: e.location.clone(),
                repeated,
                children: Vec::new(),
            });
            let child = arena.len() - 1;
            arena[slot].children.push(child);
            queue.push_back((child, level + 1));
        }
    }
    fn build(g: &SemanticCodeGraph, arena: &[Slot], i: usize) -> HierarchyNode {
        let s = &arena[i];
        HierarchyNode {
            node: NodeView::of(g, s.node),
            via: s.via.clone(),
            repeated: s.repeated,
            children: s.children.iter().map(|&c| build(g, arena, c)).collect(),
        }
    }
    Ok(build(g, &arena, 0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PathEdge {
    pub from: String,
    pub to: String,
    pub edge_type: EdgeType,
    pub location: Option<SourceLocation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphPath {
    pub nodes: Vec<NodeView>,
    pub edges: Vec<PathEdge>,
}

impl GraphPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Shortest directed path by breadth-first search, optionally restricted to
/// some edge types. `Ok(None)` when `to` is unreachable.
pub fn shortest_path(
    g: &SemanticCodeGraph,
    from: &str,
    to: &str,
    types: &[EdgeType],
) -> Result<Option<GraphPath>, QueryError> {
    let s = index(g, from)?;
    let t = index(g, to)?;
    let mut prev: Vec<Option<EdgeRef>> = vec![None; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if v == t {
            break;
        }
        for &r in g.out_edges(v) {
            if !types.is_empty() && !types.contains(&g.edge(r).edge_type) {
                continue;
            }
            if !seen[r.to] {
                seen[r.to] = true;
                prev[r.to] = Some(r);
                queue.push_back(r.to);
            }
        }
    }
    if !seen[t] {
        return Ok(None);
    }
    let mut refs = Vec::new();
    let mut cur = t;
    while let Some(r) = prev[cur] {
        refs.push(r);
        cur = r.from;
    }
    refs.reverse();
    let mut nodes = vec![NodeView::of(g, s)];
    let mut edges = Vec::new();
    for r in refs {
        let e = g.edge(r);
        nodes.push(NodeView::of(g, r.to));
        edges.push(PathEdge {
            from: g.node(r.from).id.to_string(),
            to: g.node(r.to).id.to_string(),
            edge_type: e.edge_type.clone(),
            location: e.location.clone(),
        });
    }
    Ok(Some(GraphPath { nodes, edges }))
}
