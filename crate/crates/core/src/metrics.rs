//! Whole-graph structure metrics and node/edge distributions.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::model::{props, GraphNode, NodeKind, SemanticCodeGraph};
use crate::par;

/// How clustering and assortativity see the graph.
pub const PROJECTION: &str =
    "undirected simple projection (multi-edges collapsed, self-loops dropped)";

/// Structure metrics of one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectSummary {
    pub n: usize,
    pub m: usize,
    pub total_loc: u64,
    pub loc_per_node: f64,
    pub density: f64,
    pub avg_degree: f64,
    pub std_in_degree: f64,
    pub std_out_degree: f64,
    pub iod_in_degree: f64,
    pub iod_out_degree: f64,
    pub acc: f64,
    pub gcc: f64,
    pub dac: f64,
    /// Graph the clustering and assortativity metrics were computed on.
    pub projection: &'static str,
}

/// Undirected simple neighbour lists, sorted, without self-loops.
pub fn undirected_simple(g: &SemanticCodeGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.node_count()];
    for r in g.edges() {
        if r.from != r.to {
            adj[r.from].push(r.to);
            adj[r.to].push(r.from);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Triangles through each node of an undirected simple graph.
pub fn triangles(adj: &[Vec<usize>]) -> Vec<usize> {
    par::map_range(adj.len(), |i| {
        let twice: usize = adj[i]
            .iter()
            .map(|&j| sorted_intersection(&adj[i], &adj[j]))
            .sum();
        twice / 2
    })
}

fn population_std(values: &[f64], mean: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    (par::pairwise_sum(&sq) / values.len() as f64).sqrt()
}

fn index_of_dispersion(std: f64, mean: f64) -> f64 {
    if mean == 0.0 {
        0.0
    } else {
        std * std / mean
    }
}

/// Pearson correlation of endpoint degrees over both orientations of every
/// undirected edge. Zero when undefined (no edges, or all degrees equal).
fn assortativity(adj: &[Vec<usize>]) -> f64 {
    let mut xy = Vec::new();
    let mut x = Vec::new();
    let mut xx = Vec::new();
    for nbrs in adj {
        let du = nbrs.len() as f64;
        for &v in nbrs {
            let dv = adj[v].len() as f64;
            xy.push(du * dv);
            x.push(du);
            xx.push(du * du);
        }
    }
    if x.is_empty() {
        return 0.0;
    }
    let count = x.len() as f64;
    let mean = par::pairwise_sum(&x) / count;
    let cov = par::pairwise_sum(&xy) / count - mean * mean;
    let var = par::pairwise_sum(&xx) / count - mean * mean;
    // relative guard: regular graphs give var ~ 0 up to rounding
    if var <= 1e-12 * (mean * mean).max(1.0) {
        return 0.0;
    }
    (cov / var).clamp(-1.0, 1.0)
}

pub fn summary(g: &SemanticCodeGraph) -> ProjectSummary {
    let n = g.node_count();
    let m = g.edge_count();
    let total_loc: u64 = g.nodes().iter().map(GraphNode::loc).sum();
    let nf = n as f64;
    let per_node = |x: f64| if n == 0 { 0.0 } else { x / nf };
    let density = if n < 2 {
        0.0
    } else {
        m as f64 / (nf * (nf - 1.0))
    };
    let avg_degree = per_node(m as f64);

    let ins: Vec<f64> = (0..n).map(|i| g.in_degree(i) as f64).collect();
    let outs: Vec<f64> = (0..n).map(|i| g.out_degree(i) as f64).collect();
    let std_in_degree = population_std(&ins, avg_degree);
    let std_out_degree = population_std(&outs, avg_degree);

    let adj = undirected_simple(g);
    let tri = triangles(&adj);
    let local: Vec<f64> = (0..n)
        .map(|i| {
            let k = adj[i].len() as f64;
            if k < 2.0 {
                0.0
            } else {
                2.0 * tri[i] as f64 / (k * (k - 1.0))
            }
        })
        .collect();
    let acc = per_node(par::pairwise_sum(&local));
    let closed: usize = tri.iter().sum();
    let triplets: usize = adj
        .iter()
        .map(|a| a.len() * a.len().saturating_sub(1) / 2)
        .sum();
    let gcc = if triplets == 0 {
        0.0
    } else {
        closed as f64 / triplets as f64
    };

    ProjectSummary {
        n,
        m,
        total_loc,
        loc_per_node: per_node(total_loc as f64),
        density,
        avg_degree,
        std_in_degree,
        std_out_degree,
        iod_in_degree: index_of_dispersion(std_in_degree, avg_degree),
        iod_out_degree: index_of_dispersion(std_out_degree, avg_degree),
        acc,
        gcc,
        dac: assortativity(&adj),
        projection: PROJECTION,
    }
}

/// Degree histograms and kind/type counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DistributionReport {
    pub in_degree: BTreeMap<usize, usize>,
    pub out_degree: BTreeMap<usize, usize>,
    pub node_kinds: BTreeMap<String, usize>,
    pub edge_types: BTreeMap<String, usize>,
}

pub fn distributions(g: &SemanticCodeGraph) -> DistributionReport {
    let mut r = DistributionReport::default();
    for i in 0..g.node_count() {
        *r.in_degree.entry(g.in_degree(i)).or_default() += 1;
        *r.out_degree.entry(g.out_degree(i)).or_default() += 1;
        *r.node_kinds.entry(g.node(i).kind.to_string()).or_default() += 1;
    }
    for e in g.edges() {
        *r.edge_types
            .entry(g.edge(e).edge_type.to_string())
            .or_default() += 1;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    File,
    Package,
    Kind,
    IsLocal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown group key {0:?} (expected file, package, kind or isLocal)")]
pub struct UnknownGroupKey(pub String);

impl FromStr for GroupKey {
    type Err = UnknownGroupKey;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "file" => Ok(GroupKey::File),
            "package" => Ok(GroupKey::Package),
            "kind" => Ok(GroupKey::Kind),
            "isLocal" | "islocal" | "is_local" => Ok(GroupKey::IsLocal),
            other => Err(UnknownGroupKey(other.to_string())),
        }
    }
}

/// Conjunction of optional constraints on a node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeFilter {
    pub kinds: Vec<NodeKind>,
    pub properties: Vec<(String, String)>,
}

impl NodeFilter {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn kind(mut self, kind: NodeKind) -> Self {
        self.kinds.push(kind);
        self
    }

    pub fn property(mut self, key: &str, value: &str) -> Self {
        self.properties.push((key.to_string(), value.to_string()));
        self
    }

    pub fn matches(&self, n: &GraphNode) -> bool {
        (self.kinds.is_empty() || self.kinds.contains(&n.kind))
            && self
                .properties
                .iter()
                .all(|(k, v)| n.property(k) == Some(v.as_str()))
    }
}

/// Counts matching nodes per group, largest group first, ties by name.
/// Nodes lacking the grouping property fall into the empty-string group.
pub fn group_count(
    g: &SemanticCodeGraph,
    filter: &NodeFilter,
    key: GroupKey,
) -> Vec<(String, usize)> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for n in g.nodes().iter().filter(|n| filter.matches(n)) {
        let group = match key {
            GroupKey::File => n.property(props::FILE).unwrap_or_default().to_string(),
            GroupKey::Package => n.property(props::PACKAGE).unwrap_or_default().to_string(),
            GroupKey::IsLocal => n.property(props::IS_LOCAL).unwrap_or_default().to_string(),
            GroupKey::Kind => n.kind.to_string(),
        };
        *counts.entry(group).or_default() += 1;
    }
    let mut out: Vec<(String, usize)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, EdgeType, SourceLocation};

    fn graph(n: usize, edges: &[(usize, usize)]) -> SemanticCodeGraph {
        let loc = SourceLocation::new("f", (0, 0), (0, 1));
        let mut nodes: Vec<GraphNode> = (0..n)
            .map(|i| GraphNode::new(format!("n{i:02}"), NodeKind::Method, format!("n{i}")))
            .collect();
        for &(a, b) in edges {
            let to = nodes[b].id.clone();
            nodes[a]
                .edges
                .push(Edge::new(to, EdgeType::Call, loc.clone()));
        }
        SemanticCodeGraph::from_nodes(nodes).unwrap()
    }

    #[test]
    fn two_nodes_one_edge() {
        let s = summary(&graph(2, &[(0, 1)]));
        assert_eq!(s.density, 0.5);
        assert_eq!(s.avg_degree, 0.5);
        assert_eq!(s.std_in_degree, 0.5);
        assert_eq!(s.iod_in_degree, 0.5);
    }

    #[test]
    fn triangle_is_fully_clustered() {
        let s = summary(&graph(3, &[(0, 1), (1, 2), (2, 0)]));
        assert_eq!((s.acc, s.gcc), (1.0, 1.0));
        // regular graph: assortativity undefined
        assert_eq!(s.dac, 0.0);
    }

    #[test]
    fn star_is_disassortative() {
        let s = summary(&graph(4, &[(0, 1), (0, 2), (3, 0)]));
        assert!((s.dac + 1.0).abs() < 1e-12, "{}", s.dac);
        assert_eq!(s.gcc, 0.0);
    }

    #[test]
    fn empty_graph_is_all_zero() {
        let s = summary(&SemanticCodeGraph::default());
        assert_eq!((s.n, s.m, s.density, s.acc, s.dac), (0, 0, 0.0, 0.0, 0.0));
        assert_eq!(
            distributions(&SemanticCodeGraph::default()),
            DistributionReport::default()
        );
    }

    #[test]
    fn kind_histogram_and_group_count() {
        let mk = |id: &str, kind, file: &str| {
            GraphNode::new(id, kind, id)
                .with_property(props::FILE, file)
                .with_property(props::IS_LOCAL, "true")
        };
        let g = SemanticCodeGraph::from_nodes([
            mk("a", NodeKind::Variable, "f1"),
            mk("b", NodeKind::Variable, "f2"),
            mk("c", NodeKind::Variable, "f2"),
            mk("d", NodeKind::Method, "f2"),
        ])
        .unwrap();
        let d = distributions(&g);
        assert_eq!(
            d.node_kinds,
            BTreeMap::from([("METHOD".into(), 1), ("VARIABLE".into(), 3)])
        );
        let f = NodeFilter::all()
            .kind(NodeKind::Variable)
            .property(props::IS_LOCAL, "true");
        assert_eq!(
            group_count(&g, &f, GroupKey::File),
            vec![("f2".to_string(), 2), ("f1".to_string(), 1)]
        );
        assert!("module".parse::<GroupKey>().is_err());
    }
}
