//! Centralities on the directed simple projection of a graph.
//!
//! Importance flows along edges: a node scores high when important nodes
//! point at it.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::model::SemanticCodeGraph;
use crate::par;

use super::RankError;

pub const DAMPING: f64 = 0.85;
/// L1 change between PageRank iterates at which iteration stops.
pub const PAGERANK_TOLERANCE: f64 = 1e-10;
pub const PAGERANK_MAX_ITER: usize = 200;
/// Katz attenuation as a fraction of `1 / lambda_max`.
pub const KATZ_FACTOR: f64 = 0.9;
/// Attenuation used when the projection has no cycle.
pub const KATZ_ACYCLIC_ALPHA: f64 = 0.9;
pub const KATZ_BETA: f64 = 1.0;
pub const KATZ_TOLERANCE: f64 = 1e-13;
pub const KATZ_MAX_ITER: usize = 10_000;
pub const EIGEN_TOLERANCE: f64 = 1e-13;
pub const EIGEN_MAX_ITER: usize = 20_000;
/// The teleported matrix can have a small spectral gap, so it gets more room.
pub const TELEPORT_MAX_ITER: usize = 1_000_000;
/// Total teleport weight added when plain eigenvector iteration stagnates.
pub const TELEPORT: f64 = 1e-6;
const SPECTRAL_TOLERANCE: f64 = 1e-13;
const SPECTRAL_MAX_ITER: usize = 100_000;

/// Sorted, deduplicated neighbour lists without self-loops.
#[derive(Debug, Clone)]
pub struct Projection {
    pub out: Vec<Vec<usize>>,
    pub inc: Vec<Vec<usize>>,
}

impl Projection {
    pub fn new(g: &SemanticCodeGraph) -> Self {
        Self::from_edges(g.node_count(), g.edges().map(|r| (r.from, r.to)))
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (a, b) in edges {
            if a != b {
                out[a].push(b);
                inc[b].push(a);
            }
        }
        for l in out.iter_mut().chain(inc.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }
        Projection { out, inc }
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    /// `y[v] = sum of x over in-neighbours of v`, i.e. `A^T x`.
    fn pull(&self, x: &[f64]) -> Vec<f64> {
        par::map_range(self.len(), |v| self.inc[v].iter().map(|&u| x[u]).sum())
    }
}

fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect();
    par::pairwise_sum(&d)
}

fn l2_norm(x: &[f64]) -> f64 {
    let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
    par::pairwise_sum(&sq).sqrt()
}

fn normalize_l2(x: &mut [f64]) {
    let norm = l2_norm(x);
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRank {
    pub scores: Vec<f64>,
    pub iterations: usize,
}

/// PageRank with uniform teleport; dangling mass is spread uniformly.
pub fn pagerank(p: &Projection) -> Result<PageRank, RankError> {
    let n = p.len();
    if n == 0 {
        return Ok(PageRank {
            scores: Vec::new(),
            iterations: 0,
        });
    }
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    for it in 1..=PAGERANK_MAX_ITER {
        let dangling: Vec<f64> = (0..n)
            .filter(|&u| p.out[u].is_empty())
            .map(|u| x[u])
            .collect();
        let base = (1.0 - DAMPING) / nf + DAMPING * par::pairwise_sum(&dangling) / nf;
        let next: Vec<f64> = par::map_range(n, |v| {
            let pulled: f64 = p.inc[v].iter().map(|&u| x[u] / p.out[u].len() as f64).sum();
            base + DAMPING * pulled
        });
        let diff = l1_diff(&next, &x);
        x = next;
        if diff < PAGERANK_TOLERANCE {
            return Ok(PageRank {
                scores: x,
                iterations: it,
            });
        }
    }
    Err(RankError::NoConvergence {
        metric: "pagerank",
        iterations: PAGERANK_MAX_ITER,
    })
}

/// Spectral radius of the adjacency matrix. It is the largest spectral
/// radius over strongly connected components; each component is irreducible,
/// so shifted power iteration with Collatz-Wielandt bounds converges to it.
pub fn spectral_radius(p: &Projection, metric: &'static str) -> Result<f64, RankError> {
    let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(p.len(), 0);
    for _ in 0..p.len() {
        dg.add_node(());
    }
    for (u, outs) in p.out.iter().enumerate() {
        for &v in outs {
            dg.add_edge((u as u32).into(), (v as u32).into(), ());
        }
    }
    let mut best = 0.0f64;
    for comp in tarjan_scc(&dg) {
        if comp.len() < 2 {
            continue;
        }
        let mut local = vec![usize::MAX; p.len()];
        let members: Vec<usize> = comp.iter().map(|ix| ix.index()).collect();
        for (k, &v) in members.iter().enumerate() {
            local[v] = k;
        }
        let inc: Vec<Vec<usize>> = members
            .iter()
            .map(|&v| {
                p.inc[v]
                    .iter()
                    .filter(|&&u| local[u] != usize::MAX)
                    .map(|&u| local[u])
                    .collect()
            })
            .collect();
        best = best.max(component_radius(&inc, metric)?);
    }
    Ok(best)
}

fn component_radius(inc: &[Vec<usize>], metric: &'static str) -> Result<f64, RankError> {
    let k = inc.len();
    let mut x = vec![1.0 / k as f64; k];
    for _ in 0..SPECTRAL_MAX_ITER {
        // (A^T + I) x keeps every entry positive on an irreducible block
        let y: Vec<f64> = (0..k)
            .map(|v| x[v] + inc[v].iter().map(|&u| x[u]).sum::<f64>())
            .collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for v in 0..k {
            let r = y[v] / x[v];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo <= SPECTRAL_TOLERANCE * hi {
            return Ok((hi + lo) / 2.0 - 1.0);
        }
        let s: f64 = y.iter().sum();
        x = y.into_iter().map(|v| v / s).collect();
    }
    Err(RankError::NoConvergence {
        metric,
        iterations: SPECTRAL_MAX_ITER,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Katz {
    pub scores: Vec<f64>,
    pub alpha: f64,
    pub lambda_max: f64,
    pub iterations: usize,
}

/// Katz centrality `x = alpha A^T x + beta`, scaled to unit Euclidean norm.
pub fn katz(p: &Projection) -> Result<Katz, RankError> {
    let n = p.len();
    let lambda_max = spectral_radius(p, "katz")?;
    let alpha = if lambda_max > 0.0 {
        KATZ_FACTOR / lambda_max
    } else {
        KATZ_ACYCLIC_ALPHA
    };
    let mut x = vec![KATZ_BETA; n];
    for it in 1..=KATZ_MAX_ITER {
        let pulled = p.pull(&x);
        let next: Vec<f64> = pulled.iter().map(|s| alpha * s + KATZ_BETA).collect();
        let diff = l1_diff(&next, &x);
        let scale = par::pairwise_sum(&next);
        x = next;
        if diff <= KATZ_TOLERANCE * scale {
            normalize_l2(&mut x);
            return Ok(Katz {
                scores: x,
                alpha,
                lambda_max,
                iterations: it,
            });
        }
    }
    Err(RankError::NoConvergence {
        metric: "katz",
        iterations: KATZ_MAX_ITER,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvector {
    pub scores: Vec<f64>,
    pub iterations: usize,
    /// True when the teleport fallback produced the scores.
    pub teleport: bool,
}

/// Incoming eigenvector centrality with unit Euclidean norm.
///
/// Plain shifted power iteration on `A^T` runs first. On acyclic graphs, or
/// when it fails to settle, a uniform teleport of total weight [`TELEPORT`]
/// makes the matrix positive and the iteration is repeated on that.
pub fn eigenvector(p: &Projection) -> Result<Eigenvector, RankError> {
    let n = p.len();
    if n == 0 {
        return Ok(Eigenvector {
            scores: Vec::new(),
            iterations: 0,
            teleport: false,
        });
    }
    let lambda = spectral_radius(p, "eigenvector")?;
    if lambda > 0.0 {
        if let Some((scores, iterations)) = power(p, 0.0, EIGEN_MAX_ITER, |_| lambda) {
            return Ok(Eigenvector {
                scores,
                iterations,
                teleport: false,
            });
        }
    }
    // the Perron root of the teleported matrix is unknown up front, so the
    // shift tracks the current Collatz-Wielandt estimate of it
    let tele = TELEPORT / n as f64;
    match power(p, tele, TELEPORT_MAX_ITER, |est| est.max(tele)) {
        Some((scores, iterations)) => Ok(Eigenvector {
            scores,
            iterations,
            teleport: true,
        }),
        None => Err(RankError::NoConvergence {
            metric: "eigenvector",
            iterations: TELEPORT_MAX_ITER,
        }),
    }
}

/// Power iteration on `A^T + tele J` with shift `shift(estimate)`. Any
/// positive shift leaves the dominant eigenvector unchanged and removes the
/// oscillation caused by periodic structure.
fn power(
    p: &Projection,
    tele: f64,
    max_iter: usize,
    shift: impl Fn(f64) -> f64,
) -> Option<(Vec<f64>, usize)> {
    let n = p.len();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut estimate = 0.0;
    for it in 1..=max_iter {
        let total = tele * par::pairwise_sum(&x);
        let mx: Vec<f64> = p.pull(&x).into_iter().map(|s| s + total).collect();
        // Rayleigh-style estimate from the entries that carry weight
        let (mut num, mut den) = (0.0, 0.0);
        for v in 0..n {
            num += mx[v] * x[v];
            den += x[v] * x[v];
        }
        if den > 0.0 {
            estimate = num / den;
        }
        let c = shift(estimate);
        let mut next: Vec<f64> = mx.iter().zip(&x).map(|(m, v)| m + c * v).collect();
        normalize_l2(&mut next);
        let diff = l2_diff(&next, &x);
        x = next;
        if diff < EIGEN_TOLERANCE {
            return Some((x, it));
        }
    }
    None
}

fn l2_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    l2_norm(&d)
}

/// Brandes betweenness over directed shortest paths, endpoints excluded,
/// unnormalized. Sources are split into fixed chunks whose partial sums are
/// added in chunk order, so the result does not depend on thread count.
pub fn betweenness(p: &Projection) -> Vec<f64> {
    const CHUNK: usize = 32;
    let n = p.len();
    let parts = par::fold_chunks(
        n,
        CHUNK,
        || vec![0.0; n],
        |acc: &mut Vec<f64>, s| {
            brandes_from(p, s, acc);
        },
    );
    let mut total = vec![0.0; n];
    for part in parts {
        for (t, v) in total.iter_mut().zip(part) {
            *t += v;
        }
    }
    total
}

fn brandes_from(p: &Projection, s: usize, acc: &mut [f64]) {
    let n = p.len();
    let mut order = Vec::with_capacity(n);
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    sigma[s] = 1.0;
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &p.out[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    for &w in order.iter().rev() {
        for &v in &p.inc[w] {
            if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
        }
        if w != s {
            acc[w] += delta[w];
        }
    }
}

/// Harmonic centrality over incoming distances, normalized by `n - 1`.
pub fn harmonic(p: &Projection) -> Vec<f64> {
    let n = p.len();
    if n < 2 {
        return vec![0.0; n];
    }
    par::map_range(n, |v| {
        let mut dist = vec![usize::MAX; n];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        let mut sum = 0.0;
        while let Some(u) = queue.pop_front() {
            for &w in &p.inc[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    sum += 1.0 / dist[w] as f64;
                    queue.push_back(w);
                }
            }
        }
        sum / (n - 1) as f64
    })
}
