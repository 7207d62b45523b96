//! Planted-partition graphs, label agreement and a dense modularity oracle.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RawGraph;

/// `blocks` groups of `size` nodes; each unordered pair is linked with
/// `p_in` inside a group and `p_out` across, in a random direction.
pub fn planted(
    seed: u64,
    blocks: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
) -> (RawGraph, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = blocks * size;
    let truth: Vec<usize> = (0..n).map(|i| i / size).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if truth[u] == truth[v] { p_in } else { p_out };
            if rng.random_bool(p) {
                edges.push(if rng.random_bool(0.5) { (u, v) } else { (v, u) });
            }
        }
    }
    (
        RawGraph {
            n,
            edges,
            loc: vec![1; n],
        },
        truth,
    )
}

/// Fraction of nodes labeled correctly under the best one-to-one matching
/// of found communities to true groups; unmatched communities count as
/// wrong.
pub fn agreement(found: &[usize], truth: &[usize]) -> f64 {
    let mut overlap: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&f, &t) in found.iter().zip(truth) {
        *overlap.entry((f, t)).or_default() += 1;
    }
    let groups = truth.iter().max().map_or(0, |m| m + 1);
    let comms = found.iter().max().map_or(0, |m| m + 1);
    // exhaustive search over injective maps group -> community
    fn best(
        g: usize,
        groups: usize,
        comms: usize,
        used: &mut Vec<bool>,
        ov: &BTreeMap<(usize, usize), usize>,
    ) -> usize {
        if g == groups {
            return 0;
        }
        let mut top = best(g + 1, groups, comms, used, ov);
        for c in 0..comms {
            if !used[c] {
                used[c] = true;
                let here = ov.get(&(c, g)).copied().unwrap_or(0);
                top = top.max(here + best(g + 1, groups, comms, used, ov));
                used[c] = false;
            }
        }
        top
    }
    best(0, groups, comms, &mut vec![false; comms], &overlap) as f64 / truth.len() as f64
}

/// Newman modularity from a dense symmetric weight matrix built from the
/// raw edges (self-loops dropped, weight = multiplicity).
pub fn modularity_dense(g: &RawGraph, labels: &[usize], resolution: f64) -> f64 {
    let mut a = vec![vec![0.0; g.n]; g.n];
    for &(u, v) in &g.edges {
        if u != v {
            a[u][v] += 1.0;
            a[v][u] += 1.0;
        }
    }
    let k: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..g.n {
        for j in 0..g.n {
            if labels[i] == labels[j] {
                q += a[i][j] - resolution * k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}
