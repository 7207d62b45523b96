//! Class collaboration network and call graph views of a project graph.

use std::collections::{BTreeMap, HashMap};

use crate::model::{
    declaring_edge, CcnEdgeType, Edge, EdgeType, GraphNode, NodeKind, SemanticCodeGraph,
};

/// Edge properties recording why a CCN edge exists.
pub mod witness {
    /// Id of the node carrying the first justifying edge.
    pub const FROM: &str = "witnessFrom";
    /// Type of that edge.
    pub const EDGE: &str = "witnessEdge";
    /// Target of that edge.
    pub const TO: &str = "witnessTo";
    /// Number of justifying edges folded into this one.
    pub const COUNT: &str = "witnesses";
}

/// Nearest class-level ancestor of every node along declaring edges.
fn owners(g: &SemanticCodeGraph) -> Vec<Option<usize>> {
    let n = g.node_count();
    let parent: Vec<Option<usize>> = (0..n)
        .map(|i| {
            let via = declaring_edge(&g.node(i).kind);
            g.in_edges_of(i, &via).map(|r| r.from).min()
        })
        .collect();
    (0..n)
        .map(|i| {
            let mut cur = i;
            // bounded walk: hand-made graphs may contain declaration cycles
            for _ in 0..=n {
                if g.node(cur).kind.is_class_level() {
                    return Some(cur);
                }
                cur = parent[cur]?;
            }
            None
        })
        .collect()
}

/// Class collaboration network: class-level nodes with INHERITANCE (from
/// EXTEND), AGGREGATION (from field types) and REFERENCE (from parameter and
/// return types) edges. Parallel edges collapse into one that carries the
/// first witness and a witness count; self-loops are dropped. Existing CCN
/// edges pass through, so the derivation is idempotent.
pub fn to_ccn(g: &SemanticCodeGraph) -> SemanticCodeGraph {
    let owner = owners(g);
    let is_class = |i: usize| g.node(i).kind.is_class_level();
    // (from, to, type) -> (edge, count); BTreeMap keeps output order stable
    let mut derived: BTreeMap<(usize, usize, CcnEdgeType), (Edge, usize)> = BTreeMap::new();

    for r in g.edges() {
        if !is_class(r.to) {
            continue;
        }
        let src = g.node(r.from);
        let e = g.edge(r);
        let (from, ty) = match (&e.edge_type, &src.kind) {
            (EdgeType::Extend, k) if k.is_class_level() => (Some(r.from), CcnEdgeType::Inheritance),
            (EdgeType::Ccn(t), k) if k.is_class_level() => (Some(r.from), *t),
            (EdgeType::Type, NodeKind::Value | NodeKind::Variable) => {
                // only fields: their declaring parent is the class itself
                let parent = g
                    .in_edges_of(r.from, &EdgeType::Declaration)
                    .map(|p| p.from)
                    .min();
                match parent {
                    Some(p) if is_class(p) => (Some(p), CcnEdgeType::Aggregation),
                    _ => continue,
                }
            }
            (EdgeType::Type, NodeKind::Param) => (owner[r.from], CcnEdgeType::Reference),
            (EdgeType::ReturnType, _) => (owner[r.from], CcnEdgeType::Reference),
            _ => continue,
        };
        let Some(from) = from else { continue };
        if from == r.to {
            continue;
        }
        derived
            .entry((from, r.to, ty))
            .and_modify(|(_, c)| *c += 1)
            .or_insert_with(|| {
                let mut edge = Edge {
                    to: g.node(r.to).id.clone(),
                    edge_type: EdgeType::Ccn(ty),
                    location: e.location.clone(),
                    properties: Default::default(),
                };
                if let EdgeType::Ccn(_) = e.edge_type {
                    edge.properties = e.properties.clone();
                } else {
                    edge.properties
                        .insert(witness::FROM.into(), src.id.to_string());
                    edge.properties
                        .insert(witness::EDGE.into(), e.edge_type.to_string());
                    edge.properties.insert(witness::TO.into(), e.to.to_string());
                }
                (edge, 1)
            });
    }

    let mut out: HashMap<usize, Vec<Edge>> = HashMap::new();
    for ((from, _, _), (mut edge, count)) in derived {
        // a passed-through CCN edge already carries its count
        let prior: usize = edge
            .properties
            .get(witness::COUNT)
            .and_then(|c| c.parse().ok())
            .unwrap_or(0);
        edge.properties
            .insert(witness::COUNT.into(), prior.max(count).to_string());
        out.entry(from).or_default().push(edge);
    }
    let nodes = (0..g.node_count()).filter(|&i| is_class(i)).map(|i| {
        let n = g.node(i);
        GraphNode {
            edges: out.remove(&i).unwrap_or_default(),
            ..n.clone()
        }
    });
    SemanticCodeGraph::from_nodes(nodes).expect("node ids are unique in the source graph")
}

/// Call graph: CALL edges between methods, constructors, values and
/// variables. Nodes without any such edge are dropped.
pub fn to_cg(g: &SemanticCodeGraph) -> SemanticCodeGraph {
    let keep = |i: usize| g.node(i).kind.is_callable_or_value();
    let mut out: Vec<Vec<Edge>> = vec![Vec::new(); g.node_count()];
    let mut touched = vec![false; g.node_count()];
    for r in g.edges() {
        let e = g.edge(r);
        if e.edge_type == EdgeType::Call && keep(r.from) && keep(r.to) {
            out[r.from].push(e.clone());
            touched[r.from] = true;
            touched[r.to] = true;
        }
    }
    let nodes = out
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| touched[i])
        .map(|(i, edges)| GraphNode {
            edges,
            ..g.node(i).clone()
        });
    SemanticCodeGraph::from_nodes(nodes).expect("node ids are unique in the source graph")
}

/// The three analyzable views of a project.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphKind {
    Scg,
    Ccn,
    Cg,
}

impl GraphKind {
    pub const ALL: [GraphKind; 3] = [GraphKind::Scg, GraphKind::Ccn, GraphKind::Cg];

    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Scg => "SCG",
            GraphKind::Ccn => "CCN",
            GraphKind::Cg => "CG",
        }
    }

    pub fn derive(self, scg: &SemanticCodeGraph) -> SemanticCodeGraph {
        match self {
            GraphKind::Scg => scg.clone(),
            GraphKind::Ccn => to_ccn(scg),
            GraphKind::Cg => to_cg(scg),
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "SCG" => Ok(GraphKind::Scg),
            "CCN" => Ok(GraphKind::Ccn),
            "CG" => Ok(GraphKind::Cg),
            other => Err(format!(
                "unknown graph kind {other:?} (expected SCG, CCN or CG)"
            )),
        }
    }
}
