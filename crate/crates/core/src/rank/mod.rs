//! Critical-entity ranking: eight per-node metrics and their combination.

pub mod centrality;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::model::SemanticCodeGraph;
use crate::par;

use centrality::Projection;

/// Depth of each per-metric list feeding the combined score.
pub const COMBINED_DEPTH: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("{metric} did not converge within {iterations} iterations")]
    NoConvergence {
        metric: &'static str,
        iterations: usize,
    },
    #[error("unknown ranking metric {0:?}")]
    UnknownMetric(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RankMetric {
    Loc,
    OutDegree,
    InDegree,
    Eigenvector,
    Katz,
    PageRank,
    Betweenness,
    Harmonic,
}

impl RankMetric {
    pub const ALL: [RankMetric; 8] = [
        RankMetric::Loc,
        RankMetric::OutDegree,
        RankMetric::InDegree,
        RankMetric::Eigenvector,
        RankMetric::Katz,
        RankMetric::PageRank,
        RankMetric::Betweenness,
        RankMetric::Harmonic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RankMetric::Loc => "loc",
            RankMetric::OutDegree => "out_degree",
            RankMetric::InDegree => "in_degree",
            RankMetric::Eigenvector => "eigenvector",
            RankMetric::Katz => "katz",
            RankMetric::PageRank => "pagerank",
            RankMetric::Betweenness => "betweenness",
            RankMetric::Harmonic => "harmonic",
        }
    }
}

impl fmt::Display for RankMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankMetric {
    type Err = RankError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        RankMetric::ALL
            .into_iter()
            .find(|m| m.as_str() == norm)
            .ok_or_else(|| RankError::UnknownMetric(s.to_string()))
    }
}

/// Per-node scores of one metric plus the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Scores {
    pub values: Vec<f64>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankEntry {
    pub id: String,
    pub display_name: String,
    pub score: f64,
    /// Number of metric lists the node appeared in (combined ranking only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub appearances: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankTable {
    pub metric: String,
    pub k: usize,
    pub entries: Vec<RankEntry>,
    pub metadata: BTreeMap<String, String>,
}

fn meta(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

const PROJECTION: &str = "directed simple projection (multi-edges collapsed, self-loops dropped)";

/// Raw scores of `metric` for every node, in node order.
pub fn scores(g: &SemanticCodeGraph, metric: RankMetric) -> Result<Scores, RankError> {
    let n = g.node_count();
    let projected = || Projection::new(g);
    let (values, metadata) = match metric {
        RankMetric::Loc => (
            (0..n).map(|i| g.node(i).loc() as f64).collect(),
            meta(&[("source", "properties.loc (absent reads as 0)".into())]),
        ),
        RankMetric::OutDegree => (
            (0..n).map(|i| g.out_degree(i) as f64).collect(),
            meta(&[("multiplicity", "counted".into())]),
        ),
        RankMetric::InDegree => (
            (0..n).map(|i| g.in_degree(i) as f64).collect(),
            meta(&[("multiplicity", "counted".into())]),
        ),
        RankMetric::PageRank => {
            let pr = centrality::pagerank(&projected())?;
            (
                pr.scores,
                meta(&[
                    ("projection", PROJECTION.into()),
                    ("direction", "incoming".into()),
                    ("damping", centrality::DAMPING.to_string()),
                    ("teleport", "uniform; dangling mass spread uniformly".into()),
                    ("tolerance", format!("{:e}", centrality::PAGERANK_TOLERANCE)),
                    ("iterations", pr.iterations.to_string()),
                ]),
            )
        }
        RankMetric::Katz => {
            let k = centrality::katz(&projected())?;
            (
                k.scores,
                meta(&[
                    ("projection", PROJECTION.into()),
                    ("direction", "incoming".into()),
                    ("alpha", k.alpha.to_string()),
                    ("beta", centrality::KATZ_BETA.to_string()),
                    ("lambdaMax", k.lambda_max.to_string()),
                    ("iterations", k.iterations.to_string()),
                    ("normalization", "unit L2 norm".into()),
                ]),
            )
        }
        RankMetric::Eigenvector => {
            let e = centrality::eigenvector(&projected())?;
            let fallback = if e.teleport {
                format!("teleport {:e}", centrality::TELEPORT)
            } else {
                "none".into()
            };
            (
                e.scores,
                meta(&[
                    ("projection", PROJECTION.into()),
                    ("direction", "incoming".into()),
                    ("fallback", fallback),
                    ("iterations", e.iterations.to_string()),
                    ("normalization", "unit L2 norm".into()),
                ]),
            )
        }
        RankMetric::Betweenness => (
            centrality::betweenness(&projected()),
            meta(&[
                ("projection", PROJECTION.into()),
                ("normalized", "false".into()),
            ]),
        ),
        RankMetric::Harmonic => (
            centrality::harmonic(&projected()),
            meta(&[
                ("projection", PROJECTION.into()),
                ("direction", "incoming".into()),
                ("normalization", "n-1".into()),
            ]),
        ),
    };
    Ok(Scores { values, metadata })
}

/// Ordering key: scores equal to twelve significant digits tie, so nodes
/// that are symmetric in the graph fall back to id order.
fn score_key(s: f64) -> f64 {
    if s == 0.0 || !s.is_finite() {
        return s;
    }
    format!("{s:.11e}").parse().unwrap_or(s)
}

/// Top `k` nodes by `metric`, ties broken by node id.
pub fn rank(g: &SemanticCodeGraph, metric: RankMetric, k: usize) -> Result<RankTable, RankError> {
    if k < 1 {
        return Err(RankError::InvalidK);
    }
    let Scores { values, metadata } = scores(g, metric)?;
    let mut order: Vec<(f64, usize)> = values.iter().map(|&s| score_key(s)).zip(0..).collect();
    order.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then_with(|| g.node(a.1).id.cmp(&g.node(b.1).id))
    });
    let entries = order
        .into_iter()
        .take(k)
        .map(|(_, i)| {
            let node = g.node(i);
            RankEntry {
                id: node.id.to_string(),
                display_name: node.display_name.clone(),
                score: values[i],
                appearances: None,
            }
        })
        .collect();
    Ok(RankTable {
        metric: metric.as_str().to_string(),
        k,
        entries,
        metadata,
    })
}

/// Combines per-metric lists: position 1 of each list earns `k` points,
/// position `k` earns 1. Only the first `k` entries of each table count.
/// Ties go to the node seen in more lists, then to the smaller id.
pub fn combine(tables: &[RankTable], k: usize) -> RankTable {
    let mut points: HashMap<&str, (usize, usize, &str)> = HashMap::new();
    for t in tables {
        for (pos, e) in t.entries.iter().take(k).enumerate() {
            let slot = points.entry(&e.id).or_insert((0, 0, &e.display_name));
            slot.0 += k - pos;
            slot.1 += 1;
        }
    }
    let mut rows: Vec<(&str, (usize, usize, &str))> = points.into_iter().collect();
    rows.sort_by(|a, b| {
        b.1 .0
            .cmp(&a.1 .0)
            .then(b.1 .1.cmp(&a.1 .1))
            .then(a.0.cmp(b.0))
    });
    let sources = tables
        .iter()
        .map(|t| t.metric.as_str())
        .collect::<Vec<_>>()
        .join(",");
    RankTable {
        metric: "combined".into(),
        k,
        entries: rows
            .into_iter()
            .map(|(id, (score, seen, name))| RankEntry {
                id: id.to_string(),
                display_name: name.to_string(),
                score: score as f64,
                appearances: Some(seen),
            })
            .collect(),
        metadata: meta(&[("metrics", sources), ("points", format!("{k}..1 per list"))]),
    }
}

/// Every base table at depth `k`, computed concurrently.
pub fn base_tables(g: &SemanticCodeGraph, k: usize) -> Result<Vec<RankTable>, RankError> {
    if k < 1 {
        return Err(RankError::InvalidK);
    }
    par::map(&RankMetric::ALL, |&m| rank(g, m, k))
        .into_iter()
        .collect()
}

/// Combined importance over the eight base metrics.
pub fn combined_importance(g: &SemanticCodeGraph, k: usize) -> Result<RankTable, RankError> {
    Ok(combine(&base_tables(g, k)?, k))
}
