//! Random class/method graphs and a quadratic similar-method oracle that
//! works on id strings rather than node indices.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scg_core::model::{Edge, EdgeType, GraphNode, NodeKind, SemanticCodeGraph, SourceLocation};

/// Up to `max_methods` methods over a small shared pool of symbols, so
/// that many pairs overlap heavily. Some methods have no parent, one in a
/// few has two, and constructors mimic methods without being candidates.
pub fn random_methods(seed: u64, max_methods: usize) -> SemanticCodeGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = rng.random_range(1..8);
    let methods = rng.random_range(2..=max_methods);
    let pool = rng.random_range(6..20);
    let loc = SourceLocation::default;
    let mut nodes: Vec<GraphNode> = (0..classes)
        .map(|c| GraphNode::new(format!("p/C{c}#"), NodeKind::Class, format!("C{c}")))
        .collect();
    nodes.extend(
        (0..pool).map(|s| GraphNode::new(format!("p/S.v{s}."), NodeKind::Value, format!("v{s}"))),
    );
    let mut bodies = Vec::new();
    for m in 0..methods {
        let kind = if rng.random_bool(0.05) {
            NodeKind::Constructor
        } else {
            NodeKind::Method
        };
        let mut node = GraphNode::new(format!("p/M{m:03}()."), kind, format!("m{m}"));
        let used = rng.random_range(0..pool.min(12));
        for _ in 0..used {
            let s = rng.random_range(0..pool);
            for _ in 0..rng.random_range(1..3) {
                node.edges
                    .push(Edge::new(format!("p/S.v{s}."), EdgeType::Call, loc()));
            }
        }
        if m > 0 && rng.random_bool(0.3) {
            let callee = rng.random_range(0..m);
            node.edges.push(Edge::new(
                format!("p/M{callee:03}()."),
                EdgeType::Call,
                loc(),
            ));
        }
        bodies.push(node);
        if !rng.random_bool(0.1) {
            let c = rng.random_range(0..classes);
            nodes[c].edges.push(Edge::new(
                format!("p/M{m:03}()."),
                EdgeType::Declaration,
                loc(),
            ));
            if rng.random_bool(0.05) {
                let d = rng.random_range(0..classes);
                nodes[d].edges.push(Edge::new(
                    format!("p/M{m:03}()."),
                    EdgeType::Declaration,
                    loc(),
                ));
            }
        }
    }
    nodes.extend(bodies);
    SemanticCodeGraph::from_nodes(nodes).unwrap()
}

/// `(m1, m2, s, p1, p2)` for every qualifying unordered method pair,
/// sorted by `s` descending then ids.
pub fn similar_brute(
    g: &SemanticCodeGraph,
    min_shared: usize,
    min_percent: u32,
) -> Vec<(String, String, usize, u32, u32)> {
    let mut succ: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut parents: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for n in g.nodes() {
        if n.kind == NodeKind::Method {
            succ.insert(
                n.id.to_string(),
                n.edges.iter().map(|e| e.to.to_string()).collect(),
            );
            parents.entry(n.id.to_string()).or_default();
        }
    }
    for n in g.nodes() {
        for e in &n.edges {
            if e.edge_type == EdgeType::Declaration {
                if let Some(p) = parents.get_mut(e.to.as_str()) {
                    p.push(n.id.to_string());
                }
            }
        }
    }
    for p in parents.values_mut() {
        p.sort();
    }
    let ids: Vec<&String> = succ.keys().collect();
    let mut out = Vec::new();
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i + 1..] {
            let (sa, sb) = (&succ[*a], &succ[*b]);
            if sa.is_empty() || sb.is_empty() {
                continue;
            }
            let s = sa.intersection(sb).count();
            // floor of the float quotient, as the reference script computes it
            let p1 = (s as f64 / sa.len() as f64 * 100.0).floor() as u32;
            let p2 = (s as f64 / sb.len() as f64 * 100.0).floor() as u32;
            let same_parent = !parents[*a].is_empty() && parents[*a] == parents[*b];
            if s >= min_shared && p1 >= min_percent && p2 >= min_percent && !same_parent {
                out.push(((*a).clone(), (*b).clone(), s, p1, p2));
            }
        }
    }
    out.sort_by(|x, y| {
        y.2.cmp(&x.2)
            .then_with(|| x.0.cmp(&y.0))
            .then_with(|| x.1.cmp(&y.1))
    });
    out
}
