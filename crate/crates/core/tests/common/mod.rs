//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! Nothing here calls into the analysis code under test: each oracle
//! recomputes its quantity from the raw edge list with a different method.

#![allow(dead_code)]

pub mod criteria;
pub mod methods;
pub mod planted;
pub mod structure;
pub mod wire;

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scg_core::model::{Edge, EdgeType, GraphNode, NodeKind, SemanticCodeGraph, SourceLocation};

/// Relative closeness used by every numeric oracle comparison.
pub const REL_TOL: f64 = 1e-6;
pub const ABS_FLOOR: f64 = 1e-12;

pub fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()) + ABS_FLOOR
}

/// A raw directed multigraph: node count, edges (self-loops and repeats
/// allowed) and a loc value per node.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub loc: Vec<u64>,
}

pub fn node_id(i: usize) -> String {
    format!("g/N{i:02}#")
}

impl RawGraph {
    pub fn to_scg(&self) -> SemanticCodeGraph {
        let mut nodes: Vec<GraphNode> = (0..self.n)
            .map(|i| {
                GraphNode::new(node_id(i), NodeKind::Class, format!("N{i:02}"))
                    .with_property("loc", self.loc[i].to_string())
            })
            .collect();
        for &(a, b) in &self.edges {
            nodes[a].edges.push(Edge::new(
                node_id(b),
                EdgeType::Call,
                SourceLocation::default(),
            ));
        }
        SemanticCodeGraph::from_nodes(nodes).unwrap()
    }

    /// Dense 0/1 adjacency of the simple projection.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            if u != v {
                a[(u, v)] = 1.0;
            }
        }
        a
    }

    pub fn simple_edges(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().copied().filter(|(u, v)| u != v).collect()
    }
}

/// Random multigraph with `2..=max_n` nodes. Every fourth seed is acyclic.
pub fn random_graph(seed: u64, max_n: usize) -> RawGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n);
    let p = rng.random_range(0.03..0.25);
    let acyclic = seed % 4 == 3;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if (acyclic && u >= v) || (u == v && !rng.random_bool(0.1)) {
                continue;
            }
            if rng.random_bool(p) {
                edges.push((u, v));
                if rng.random_bool(0.15) {
                    edges.push((u, v));
                }
            }
        }
    }
    let loc = (0..n).map(|_| rng.random_range(0..400)).collect();
    RawGraph { n, edges, loc }
}

pub fn is_acyclic(g: &RawGraph) -> bool {
    let mut indeg = vec![0usize; g.n];
    let simple = g.simple_edges();
    for &(_, v) in &simple {
        indeg[v] += 1;
    }
    let mut ready: Vec<usize> = (0..g.n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = ready.pop() {
        seen += 1;
        for &(a, b) in &simple {
            if a == u {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    seen == g.n
}

/// PageRank as the exact solution of its linear system.
pub fn pagerank_exact(g: &RawGraph, d: f64) -> Vec<f64> {
    let n = g.n;
    let a = g.adjacency();
    let mut m = DMatrix::<f64>::identity(n, n);
    for u in 0..n {
        let out: f64 = a.row(u).sum();
        for v in 0..n {
            let share = if out == 0.0 {
                1.0 / n as f64
            } else {
                a[(u, v)] / out
            };
            m[(v, u)] -= d * share;
        }
    }
    let rhs = DVector::from_element(n, (1.0 - d) / n as f64);
    m.lu().solve(&rhs).unwrap().iter().copied().collect()
}

/// Largest eigenvalue modulus of the simple adjacency matrix.
pub fn spectral_radius_dense(g: &RawGraph) -> f64 {
    if is_acyclic(g) {
        return 0.0;
    }
    g.adjacency()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

fn unit(v: DVector<f64>) -> Vec<f64> {
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    let norm = v.norm();
    v.iter().map(|x| sign * x / norm).collect()
}

/// Katz scores by solving `(I - alpha A^T) x = 1`, unit norm.
pub fn katz_exact(g: &RawGraph, factor: f64, acyclic_alpha: f64) -> (f64, Vec<f64>) {
    let n = g.n;
    let lambda = spectral_radius_dense(g);
    let alpha = if lambda > 0.0 {
        factor / lambda
    } else {
        acyclic_alpha
    };
    let m = DMatrix::<f64>::identity(n, n) - g.adjacency().transpose() * alpha;
    let x = m.lu().solve(&DVector::from_element(n, 1.0)).unwrap();
    (alpha, unit(x))
}

/// Perron vector of `A^T` from the null space of `A^T - lambda I`. Returns
/// `None` when that null space is not one-dimensional.
pub fn eigenvector_null_space(g: &RawGraph) -> Option<Vec<f64>> {
    let n = g.n;
    let lambda = spectral_radius_dense(g);
    let m = g.adjacency().transpose() - DMatrix::<f64>::identity(n, n) * lambda;
    let svd = m.svd(false, true);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    if n > 1 && svd.singular_values[order[1]] < 1e-7 {
        return None;
    }
    let v_t = svd.v_t.unwrap();
    Some(unit(v_t.row(order[0]).transpose()))
}

/// Dense shifted power iteration on `A^T`; the reference when the dominant
/// eigenvalue is not simple.
pub fn eigenvector_dense_power(g: &RawGraph, shift: f64) -> Vec<f64> {
    let n = g.n;
    let m = g.adjacency().transpose() + DMatrix::<f64>::identity(n, n) * shift;
    let mut x = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    for _ in 0..2_000_000 {
        let mut y = &m * &x;
        y /= y.norm();
        let done = (&y - &x).norm() < 1e-15;
        x = y;
        if done {
            break;
        }
    }
    x.iter().copied().collect()
}

/// Perron vector of `A^T + t J` with `t = teleport / n`. For `rho` above
/// the spectral radius of `A`, `x = (rho I - A^T)^-1 1` satisfies the
/// eigen-equation exactly when `t * sum(x) = 1`; `rho` is found by bisection.
pub fn eigenvector_teleport(g: &RawGraph, teleport: f64) -> Vec<f64> {
    let n = g.n;
    let t = teleport / n as f64;
    let at = g.adjacency().transpose();
    let solve = |rho: f64| {
        let m = DMatrix::<f64>::identity(n, n) * rho - &at;
        m.lu().solve(&DVector::from_element(n, 1.0)).unwrap()
    };
    let mut lo = spectral_radius_dense(g);
    let mut hi = lo + 2.0 * n as f64 + 1.0;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let x = solve(mid);
        // below the root the resolvent sum is too large (or not positive)
        if x.iter().any(|v| *v <= 0.0) || t * x.sum() > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    unit(solve(hi))
}

/// All-pairs shortest path lengths of the simple projection (Floyd-Warshall).
pub fn distances(g: &RawGraph) -> Vec<Vec<Option<usize>>> {
    let n = g.n;
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for (u, v) in g.simple_edges() {
        d[u][v] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Betweenness by explicit pair enumeration over shortest-path counts.
pub fn betweenness_brute(g: &RawGraph) -> Vec<f64> {
    let n = g.n;
    let d = distances(g);
    let simple = g.simple_edges();
    // sigma[s][t]: number of shortest s-t paths, built in distance order
    let mut sigma = vec![vec![0.0f64; n]; n];
    for s in 0..n {
        let mut by_dist: Vec<usize> = (0..n).filter(|&t| d[s][t].is_some()).collect();
        by_dist.sort_by_key(|&t| d[s][t]);
        sigma[s][s] = 1.0;
        for &t in by_dist.iter().skip(1) {
            sigma[s][t] = simple
                .iter()
                .filter(|&&(u, w)| w == t && d[s][u].is_some_and(|du| du + 1 == d[s][t].unwrap()))
                .map(|&(u, _)| sigma[s][u])
                .sum();
        }
    }
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            let Some(st) = d[s][t] else { continue };
            if s == t {
                continue;
            }
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                if let (Some(sv), Some(vt)) = (d[s][v], d[v][t]) {
                    if sv + vt == st {
                        bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                    }
                }
            }
        }
    }
    bc
}

pub fn harmonic_brute(g: &RawGraph) -> Vec<f64> {
    let n = g.n;
    if n < 2 {
        return vec![0.0; n];
    }
    let d = distances(g);
    (0..n)
        .map(|v| {
            let s: f64 = (0..n)
                .filter(|&u| u != v)
                .filter_map(|u| d[u][v])
                .map(|k| 1.0 / k as f64)
                .sum();
            s / (n - 1) as f64
        })
        .collect()
}

pub fn degrees(g: &RawGraph) -> (Vec<f64>, Vec<f64>) {
    let mut out = vec![0.0; g.n];
    let mut inc = vec![0.0; g.n];
    for &(u, v) in &g.edges {
        out[u] += 1.0;
        inc[v] += 1.0;
    }
    (out, inc)
}

/// Compares every ranking metric on `raw` against its oracle and returns a
/// description of each mismatch.
pub fn centrality_mismatches(raw: &RawGraph) -> Vec<String> {
    use scg_core::rank::{centrality, scores, RankMetric};

    let g = raw.to_scg();
    let (out_deg, in_deg) = degrees(raw);
    let mut bad = Vec::new();
    for metric in RankMetric::ALL {
        let got = scores(&g, metric).unwrap_or_else(|e| panic!("{metric}: {e}"));
        let want: Vec<f64> = match metric {
            RankMetric::Loc => raw.loc.iter().map(|&l| l as f64).collect(),
            RankMetric::OutDegree => out_deg.clone(),
            RankMetric::InDegree => in_deg.clone(),
            RankMetric::PageRank => pagerank_exact(raw, centrality::DAMPING),
            RankMetric::Katz => {
                katz_exact(raw, centrality::KATZ_FACTOR, centrality::KATZ_ACYCLIC_ALPHA).1
            }
            RankMetric::Eigenvector => {
                if got.metadata["fallback"] != "none" {
                    eigenvector_teleport(raw, centrality::TELEPORT)
                } else {
                    eigenvector_null_space(raw)
                        .unwrap_or_else(|| eigenvector_dense_power(raw, spectral_radius_dense(raw)))
                }
            }
            RankMetric::Betweenness => betweenness_brute(raw),
            RankMetric::Harmonic => harmonic_brute(raw),
        };
        for (i, (a, b)) in got.values.iter().zip(&want).enumerate() {
            if !rel_close(*a, *b) {
                bad.push(format!("{metric} node {i}: got {a:e}, oracle {b:e}"));
            }
        }
    }
    bad
}

/// A bidirectional star whose hub also has the most code tops every list.
pub fn dominant_hub() -> RawGraph {
    let n = 12;
    let mut edges = Vec::new();
    for leaf in 1..n {
        edges.push((0, leaf));
        edges.push((leaf, 0));
    }
    edges.push((1, 2));
    let mut loc = vec![10; n];
    loc[0] = 500;
    RawGraph { n, edges, loc }
}
