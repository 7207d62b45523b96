//! Similar-method mining: two methods are similar when they use largely the
//! same set of symbols but live in different parents.

use serde::Serialize;

use crate::model::{EdgeType, NodeKind, SemanticCodeGraph, SourceLocation};
use crate::par;

pub const DEFAULT_MIN_SHARED: usize = 5;
pub const DEFAULT_MIN_PERCENT: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimilarityParams {
    /// Minimum size of the shared successor set.
    pub min_shared: usize,
    /// Minimum share of each method's successors, in whole percent.
    pub min_percent: u32,
}

impl Default for SimilarityParams {
    fn default() -> Self {
        SimilarityParams {
            min_shared: DEFAULT_MIN_SHARED,
            min_percent: DEFAULT_MIN_PERCENT,
        }
    }
}

/// Two similar methods; `m1` has the smaller id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimilarPair {
    pub m1: String,
    pub m2: String,
    /// Number of successors the two methods share.
    pub s: usize,
    /// Share of `m1`'s successors that are shared, floored to whole percent.
    pub p1: u32,
    pub p2: u32,
    pub location1: Option<SourceLocation>,
    pub location2: Option<SourceLocation>,
}

/// Whole-percent share computed as `int(s / len * 100)` in floating point,
/// so reported values agree with the reference script digit for digit.
pub fn percent(shared: usize, total: usize) -> u32 {
    (shared as f64 / total as f64 * 100.0) as u32
}

/// All method pairs passing the thresholds, by shared count descending and
/// then by ids. Pairs whose DECLARATION parents are the same are dropped;
/// two methods without any parent count as having different parents.
pub fn find_similar_methods(g: &SemanticCodeGraph, params: SimilarityParams) -> Vec<SimilarPair> {
    // methods ordered by id so that pair orientation is canonical
    let mut methods: Vec<usize> = (0..g.node_count())
        .filter(|&i| g.node(i).kind == NodeKind::Method)
        .collect();
    methods.sort_by(|&a, &b| g.node(a).id.cmp(&g.node(b).id));
    let succ: Vec<Vec<usize>> = methods
        .iter()
        .map(|&m| {
            let mut s: Vec<usize> = g.out_edges(m).iter().map(|r| r.to).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let parents: Vec<Vec<usize>> = methods
        .iter()
        .map(|&m| {
            let mut p: Vec<usize> = g
                .in_edges_of(m, &EdgeType::Declaration)
                .map(|r| r.from)
                .collect();
            p.sort_unstable();
            p
        })
        .collect();

    // inverted index: successor node -> positions in `methods` using it
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for (k, s) in succ.iter().enumerate() {
        for &w in s {
            users[w].push(k);
        }
    }

    let per_method = par::map_range(methods.len(), |a| {
        let mut found = Vec::new();
        if succ[a].is_empty() {
            return found;
        }
        let mut shared: std::collections::BTreeMap<usize, usize> = Default::default();
        for &w in &succ[a] {
            // users are pushed in increasing position order
            let later = users[w].partition_point(|&b| b <= a);
            for &b in &users[w][later..] {
                *shared.entry(b).or_default() += 1;
            }
        }
        for (b, s) in shared {
            if s < params.min_shared {
                continue;
            }
            let (p1, p2) = (percent(s, succ[a].len()), percent(s, succ[b].len()));
            if p1 < params.min_percent || p2 < params.min_percent {
                continue;
            }
            if !parents[a].is_empty() && parents[a] == parents[b] {
                continue;
            }
            let (n1, n2) = (g.node(methods[a]), g.node(methods[b]));
            found.push(SimilarPair {
                m1: n1.id.to_string(),
                m2: n2.id.to_string(),
                s,
                p1,
                p2,
                location1: n1.location.clone(),
                location2: n2.location.clone(),
            });
        }
        found
    });
    let mut pairs: Vec<SimilarPair> = per_method.into_iter().flatten().collect();
    pairs.sort_by(|x, y| {
        y.s.cmp(&x.s)
            .then_with(|| x.m1.cmp(&y.m1))
            .then_with(|| x.m2.cmp(&y.m2))
    });
    pairs
}
