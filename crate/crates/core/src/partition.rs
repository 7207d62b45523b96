//! Community detection as a partitioning suggestion: greedy modularity
//! maximization (local moves plus aggregation) on an undirected weighted
//! projection of the graph.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::model::{props, EdgeType, SemanticCodeGraph};

/// Gains below this are treated as zero so float noise cannot cause cycling.
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionParams {
    pub resolution: f64,
    pub seed: u64,
    /// Weight multiplier for DECLARATION edges.
    pub declaration_weight: f64,
}

impl Default for PartitionParams {
    fn default() -> Self {
        PartitionParams {
            resolution: 1.0,
            seed: 0,
            declaration_weight: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CommunitySummary {
    pub label: usize,
    pub size: usize,
    /// Most common `package` property among members; ties go to the
    /// smaller name.
    pub dominant_package: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Partition {
    /// Node id to community label. Labels run from 0 by decreasing size.
    pub labels: BTreeMap<String, usize>,
    /// Modularity of `labels`, recomputed on the projection.
    pub modularity: f64,
    pub communities: Vec<CommunitySummary>,
    pub resolution: f64,
    pub seed: u64,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.communities.len()
    }
}

/// Undirected weighted graph, self-loops dropped; `adj` is symmetric and
/// sorted by neighbour.
#[derive(Debug, Clone)]
pub struct WeightedProjection {
    pub adj: Vec<Vec<(usize, f64)>>,
}

impl WeightedProjection {
    /// Edge weight is multiplicity, DECLARATION edges count
    /// `declaration_weight` times; both directions fold into one edge.
    pub fn new(g: &SemanticCodeGraph, declaration_weight: f64) -> Self {
        let mut w: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); g.node_count()];
        for r in g.edges() {
            if r.from == r.to {
                continue;
            }
            let x = if g.edge(r).edge_type == EdgeType::Declaration {
                declaration_weight
            } else {
                1.0
            };
            *w[r.from].entry(r.to).or_default() += x;
            *w[r.to].entry(r.from).or_default() += x;
        }
        WeightedProjection {
            adj: w.into_iter().map(|m| m.into_iter().collect()).collect(),
        }
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|(_, x)| x).sum()
    }
}

/// Modularity `Q = sum_c [ L_c / m - gamma (d_c / 2m)^2 ]`.
pub fn modularity(p: &WeightedProjection, labels: &[usize], resolution: f64) -> f64 {
    let two_m: f64 = (0..p.adj.len()).map(|v| p.degree(v)).sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut internal: HashMap<usize, f64> = HashMap::new();
    let mut total: HashMap<usize, f64> = HashMap::new();
    for (v, nbrs) in p.adj.iter().enumerate() {
        for &(u, x) in nbrs {
            *total.entry(labels[v]).or_default() += x;
            if labels[u] == labels[v] {
                *internal.entry(labels[v]).or_default() += x;
            }
        }
    }
    let mut keys: Vec<usize> = total.keys().copied().collect();
    keys.sort_unstable();
    keys.iter()
        .map(|c| {
            let d = total[c] / two_m;
            internal.get(c).copied().unwrap_or(0.0) / two_m - resolution * d * d
        })
        .sum()
}

/// One aggregation level: adjacency without self-loops plus each node's
/// total weighted degree (which does include its internal weight).
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    degree: Vec<f64>,
}

/// Local-move phase. Returns each node's community and whether any node
/// moved.
fn local_moves(level: &Level, two_m: f64, gamma: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = level.adj.len();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot: Vec<f64> = level.degree.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut moved_any = false;
    let mut links: HashMap<usize, f64> = HashMap::new();
    loop {
        let mut moved = false;
        for &v in &order {
            let own = comm[v];
            let k = level.degree[v];
            links.clear();
            for &(u, x) in &level.adj[v] {
                *links.entry(comm[u]).or_default() += x;
            }
            tot[own] -= k;
            let gain = |c: usize, l: f64| l - gamma * tot[c] * k / two_m;
            let mut best = own;
            let mut best_gain = gain(own, links.get(&own).copied().unwrap_or(0.0));
            let mut cands: Vec<(usize, f64)> = links.iter().map(|(&c, &l)| (c, l)).collect();
            cands.sort_unstable_by_key(|&(c, _)| c);
            for (c, l) in cands {
                let g = gain(c, l);
                if g > best_gain + MIN_GAIN {
                    best = c;
                    best_gain = g;
                }
            }
            tot[best] += k;
            if best != own {
                comm[v] = best;
                moved = true;
                moved_any = true;
            }
        }
        if !moved {
            break;
        }
    }
    // dense relabel in order of first appearance
    let mut dense: HashMap<usize, usize> = HashMap::new();
    let comm = comm
        .into_iter()
        .map(|c| {
            let next = dense.len();
            *dense.entry(c).or_insert(next)
        })
        .collect();
    (comm, moved_any)
}

fn aggregate(level: &Level, comm: &[usize]) -> Level {
    let k = comm.iter().max().map_or(0, |m| m + 1);
    let mut w: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
    let mut degree = vec![0.0; k];
    for (v, nbrs) in level.adj.iter().enumerate() {
        degree[comm[v]] += level.degree[v];
        for &(u, x) in nbrs {
            if comm[u] != comm[v] {
                *w[comm[v]].entry(comm[u]).or_default() += x;
            }
        }
    }
    Level {
        adj: w.into_iter().map(|m| m.into_iter().collect()).collect(),
        degree,
    }
}

/// Partitions `g` by greedy modularity maximization. Nodes are processed in
/// id order before the seeded shuffle, so the result depends on ids and the
/// seed but not on how nodes happen to be stored.
pub fn partition(g: &SemanticCodeGraph, params: PartitionParams) -> Partition {
    let n = g.node_count();
    let proj = WeightedProjection::new(g, params.declaration_weight);
    let mut canon: Vec<usize> = (0..n).collect();
    canon.sort_by(|&a, &b| g.node(a).id.cmp(&g.node(b).id));
    let mut pos = vec![0; n];
    for (p, &v) in canon.iter().enumerate() {
        pos[v] = p;
    }
    let mut level = Level {
        adj: canon
            .iter()
            .map(|&v| {
                let mut a: Vec<(usize, f64)> =
                    proj.adj[v].iter().map(|&(u, x)| (pos[u], x)).collect();
                a.sort_by_key(|&(u, _)| u);
                a
            })
            .collect(),
        degree: canon.iter().map(|&v| proj.degree(v)).collect(),
    };
    let two_m: f64 = level.degree.iter().sum();
    // membership of each canonical position in the current level's nodes
    let mut member: Vec<usize> = (0..n).collect();
    if two_m > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        loop {
            let (comm, moved) = local_moves(&level, two_m, params.resolution, &mut rng);
            if !moved {
                break;
            }
            member.iter_mut().for_each(|m| *m = comm[*m]);
            level = aggregate(&level, &comm);
        }
    }

    // final labels: larger communities first, then by smallest member id
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (p, &c) in member.iter().enumerate() {
        groups.entry(c).or_default().push(p);
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
    groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut labels_by_index = vec![0; n];
    let mut communities = Vec::with_capacity(groups.len());
    for (label, members) in groups.iter().enumerate() {
        let mut packages: BTreeMap<&str, usize> = BTreeMap::new();
        for &p in members {
            let v = canon[p];
            labels_by_index[v] = label;
            if let Some(pkg) = g.node(v).property(props::PACKAGE) {
                *packages.entry(pkg).or_default() += 1;
            }
        }
        let dominant = packages
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(p, _)| p.to_string());
        communities.push(CommunitySummary {
            label,
            size: members.len(),
            dominant_package: dominant,
        });
    }
    Partition {
        labels: (0..n)
            .map(|v| (g.node(v).id.to_string(), labels_by_index[v]))
            .collect(),
        modularity: modularity(&proj, &labels_by_index, params.resolution),
        communities,
        resolution: params.resolution,
        seed: params.seed,
    }
}
