use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use scg_core::derive::GraphKind;
use scg_core::extract::{extract, ExtractError};
use scg_core::io::{self, export, write_file, ExportFormat, LoadOptions, NodeAttribute};
use scg_core::metrics::{distributions, group_count, summary, GroupKey, NodeFilter};
use scg_core::model::{props, NodeKind, SemanticCodeGraph};
use scg_core::partition::{partition, PartitionParams};
use scg_core::rank::{base_tables, combine, RankMetric, RankTable, COMBINED_DEPTH};
use scg_core::similar::{find_similar_methods, SimilarityParams};

use crate::args::{DataArgs, Format};
use crate::report::{pairs, percent, sig4, Align, Table};
use crate::workspace::Workspace;

/// An error that maps to a specific process exit code.
#[derive(Debug)]
pub struct ExitFailure {
    pub code: u8,
    pub message: String,
}

impl std::fmt::Display for ExitFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for ExitFailure {}

pub const EXIT_FAILED_FILES: u8 = 1;
pub const EXIT_BAD_INPUT: u8 = 2;

fn bad_input(message: String) -> anyhow::Error {
    ExitFailure {
        code: EXIT_BAD_INPUT,
        message,
    }
    .into()
}

/// A rendered report in both output formats.
pub struct Report {
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

pub fn emit(report: &Report, format: Format, out: Option<&Path>) -> Result<()> {
    let body = report.render(format);
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)
                    .with_context(|| format!("cannot create {}", dir.display()))?;
            }
            fs::write(p, body).with_context(|| format!("cannot write {}", p.display()))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

pub fn open(data: &DataArgs) -> Result<Workspace> {
    let options = LoadOptions {
        include: data.include.clone(),
    };
    if !data.data.is_dir() {
        return Err(bad_input(format!(
            "{} is not a readable directory",
            data.data.display()
        )));
    }
    let ws = Workspace::open(&data.data, options)?;
    for f in &ws.failures {
        eprintln!("warning: skipped {f}");
    }
    Ok(ws)
}

pub struct GenerateOutcome {
    pub files: usize,
    pub nodes: usize,
    pub edges: usize,
    pub diagnostics: usize,
    pub failures: usize,
    pub out_dir: PathBuf,
}

/// Removes `.semanticgraph` files left from an earlier run.
fn clear_stale(out_dir: &Path) -> Result<()> {
    if !out_dir.is_dir() {
        return Ok(());
    }
    for p in io::list_graph_files(out_dir)? {
        fs::remove_file(&p).with_context(|| format!("cannot remove {}", p.display()))?;
    }
    Ok(())
}

pub fn generate(project: &Path, out: Option<&Path>, verbose: bool) -> Result<GenerateOutcome> {
    let x = extract(project).map_err(|e| match e {
        ExtractError::Io { .. } => bad_input(e.to_string()),
    })?;
    let out_dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| project.join(".semanticgraph"));
    clear_stale(&out_dir)?;
    fs::create_dir_all(&out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    for f in &x.files {
        write_file(&out_dir, f)?;
    }
    if verbose {
        for d in &x.diagnostics {
            eprintln!("note: {d}");
        }
    }
    for f in &x.failures {
        eprintln!(
            "error: {}:{}:{}: {}",
            f.uri,
            f.error.line + 1,
            f.error.column + 1,
            f.error.message
        );
    }
    Ok(GenerateOutcome {
        files: x.files.len(),
        nodes: x.node_count(),
        edges: x.edge_count(),
        diagnostics: x.diagnostics.len(),
        failures: x.failures.len(),
        out_dir,
    })
}

pub fn generate_text(o: &GenerateOutcome) -> String {
    pairs(
        "generated",
        &[
            ("files", o.files.to_string()),
            ("nodes", o.nodes.to_string()),
            ("edges", o.edges.to_string()),
            ("diagnostics", o.diagnostics.to_string()),
            ("failed files", o.failures.to_string()),
            ("output", o.out_dir.display().to_string()),
        ],
    )
}

fn counts_table(
    title: &str,
    counts: &std::collections::BTreeMap<String, usize>,
    total: usize,
) -> String {
    let mut rows: Vec<(&String, &usize)> = counts.iter().collect();
    rows.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let mut t = Table::new(&[
        (title, Align::Left),
        ("count", Align::Right),
        ("share", Align::Right),
    ]);
    for (k, v) in rows {
        t.row(vec![k.clone(), v.to_string(), percent(*v, total)]);
    }
    t.render()
}

pub fn summary_report(ws: &Workspace, kinds: &[GraphKind]) -> Report {
    let mut text = String::new();
    let mut json = Vec::new();
    for &kind in kinds {
        let g = ws.graph(kind);
        let s = summary(&g);
        let d = distributions(&g);
        let _ = write!(
            text,
            "{}",
            pairs(
                &format!("{kind} summary"),
                &[
                    ("nodes", s.n.to_string()),
                    ("edges", s.m.to_string()),
                    ("total LOC", s.total_loc.to_string()),
                    ("LOC per node", sig4(s.loc_per_node)),
                    ("density", sig4(s.density)),
                    ("average degree", sig4(s.avg_degree)),
                    ("std in-degree", sig4(s.std_in_degree)),
                    ("std out-degree", sig4(s.std_out_degree)),
                    ("IoD in-degree", sig4(s.iod_in_degree)),
                    ("IoD out-degree", sig4(s.iod_out_degree)),
                    ("ACC", sig4(s.acc)),
                    ("GCC", sig4(s.gcc)),
                    ("DAC", sig4(s.dac)),
                ],
            )
        );
        let _ = writeln!(
            text,
            "  (clustering and assortativity on the {})\n",
            s.projection
        );
        text.push_str(&counts_table("node kind", &d.node_kinds, s.n));
        text.push('\n');
        text.push_str(&counts_table("edge type", &d.edge_types, s.m));
        text.push('\n');
        json.push(json!({ "graph": kind.as_str(), "summary": s, "distributions": d }));
    }
    Report {
        text,
        json: Value::Array(json),
    }
}

fn metadata_line(t: &RankTable) -> String {
    t.metadata
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join("; ")
}

fn rank_text(kind: GraphKind, t: &RankTable, rows: usize) -> String {
    let mut out = format!("{kind} {}\n", t.metric);
    if !t.metadata.is_empty() {
        let _ = writeln!(out, "  {}", metadata_line(t));
    }
    let combined = t.entries.iter().any(|e| e.appearances.is_some());
    let mut header = vec![("#", Align::Right), ("score", Align::Right)];
    if combined {
        header.push(("lists", Align::Right));
    }
    header.extend([("name", Align::Left), ("id", Align::Left)]);
    let mut table = Table::new(&header);
    for (i, e) in t.entries.iter().take(rows).enumerate() {
        let mut row = vec![(i + 1).to_string(), sig4(e.score)];
        if let Some(a) = e.appearances {
            row.push(a.to_string());
        }
        row.extend([e.display_name.clone(), e.id.clone()]);
        table.row(row);
    }
    out.push_str(&table.render());
    out.push('\n');
    out
}

pub fn crucial_report(
    ws: &Workspace,
    kinds: &[GraphKind],
    k: usize,
    only: Option<&str>,
) -> Result<Report> {
    if k < 1 {
        return Err(bad_input("-k must be at least 1".into()));
    }
    let only: Option<Option<RankMetric>> = match only {
        None => None,
        Some("combined") => Some(None),
        Some(m) => Some(Some(
            m.parse()
                .map_err(|e: scg_core::rank::RankError| bad_input(e.to_string()))?,
        )),
    };
    let mut text = String::new();
    let mut json = Vec::new();
    for &kind in kinds {
        let g = ws.graph(kind);
        let tables = base_tables(&g, k.max(COMBINED_DEPTH))?;
        let combined = combine(&tables, COMBINED_DEPTH);
        let mut shown = Vec::new();
        for t in tables.iter().chain(std::iter::once(&combined)) {
            let keep = match only {
                None => true,
                Some(None) => t.metric == "combined",
                Some(Some(m)) => t.metric == m.as_str(),
            };
            if keep {
                text.push_str(&rank_text(kind, t, k));
                let mut trimmed = t.clone();
                trimmed.entries.truncate(k);
                trimmed.k = k;
                shown.push(trimmed);
            }
        }
        json.push(json!({ "graph": kind.as_str(), "tables": shown }));
    }
    Ok(Report {
        text,
        json: Value::Array(json),
    })
}

pub fn similar_report(ws: &Workspace, params: SimilarityParams, limit: Option<usize>) -> Report {
    let g = ws.graph(GraphKind::Scg);
    let mut found = find_similar_methods(&g, params);
    let total = found.len();
    if let Some(l) = limit {
        found.truncate(l);
    }
    let mut t = Table::new(&[
        ("shared", Align::Right),
        ("p1", Align::Right),
        ("p2", Align::Right),
        ("method 1", Align::Left),
        ("method 2", Align::Left),
    ]);
    for p in &found {
        t.row(vec![
            p.s.to_string(),
            format!("{}%", p.p1),
            format!("{}%", p.p2),
            p.m1.clone(),
            p.m2.clone(),
        ]);
    }
    let text = format!(
        "similar methods (min shared {}, min coverage {}%): {total} pairs\n{}",
        params.min_shared,
        params.min_percent,
        t.render()
    );
    Report {
        text,
        json: json!({ "minShared": params.min_shared, "minPercent": params.min_percent, "total": total, "pairs": found }),
    }
}

fn with_kind_suffix(path: &Path, kind: GraphKind, many: bool) -> PathBuf {
    if !many {
        return path.to_path_buf();
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graphml".into());
    path.with_file_name(format!("{stem}.{}.{ext}", kind.as_str().to_lowercase()))
}

pub fn partition_report(
    ws: &Workspace,
    kinds: &[GraphKind],
    params: PartitionParams,
    graphml: Option<&Path>,
) -> Result<Report> {
    let mut text = String::new();
    let mut json = Vec::new();
    for &kind in kinds {
        let g = ws.graph(kind);
        let p = partition(&g, params);
        let _ = writeln!(
            text,
            "{kind} partition: {} communities, modularity {} (seed {}, resolution {})",
            p.community_count(),
            sig4(p.modularity),
            p.seed,
            p.resolution
        );
        let mut t = Table::new(&[
            ("label", Align::Right),
            ("size", Align::Right),
            ("dominant package", Align::Left),
        ]);
        for c in &p.communities {
            t.row(vec![
                c.label.to_string(),
                c.size.to_string(),
                c.dominant_package.clone().unwrap_or_else(|| "-".into()),
            ]);
        }
        text.push_str(&t.render());
        text.push('\n');
        if let Some(path) = graphml {
            let path = with_kind_suffix(path, kind, kinds.len() > 1);
            let attr = NodeAttribute {
                name: "community".into(),
                values: g
                    .nodes()
                    .iter()
                    .map(|n| p.labels[n.id.as_str()].to_string())
                    .collect(),
            };
            export(&g, ExportFormat::GraphMl, &path, &[attr])?;
        }
        json.push(json!({ "graph": kind.as_str(), "objective": "modularity", "partition": p }));
    }
    Ok(Report {
        text,
        json: Value::Array(json),
    })
}

#[derive(Serialize)]
struct CountRow {
    group: String,
    count: usize,
}

pub fn count_report(
    ws: &Workspace,
    kinds: &[GraphKind],
    kind: Option<&str>,
    local: bool,
    group_by: &str,
    top: usize,
) -> Result<Report> {
    let key: GroupKey = group_by
        .parse()
        .map_err(|e: scg_core::metrics::UnknownGroupKey| bad_input(e.to_string()))?;
    let mut filter = NodeFilter::all();
    if let Some(k) = kind {
        filter = filter.kind(NodeKind::from(k.to_ascii_uppercase().as_str()));
    }
    if local {
        filter = filter.property(props::IS_LOCAL, "true");
    }
    let mut text = String::new();
    let mut json = Vec::new();
    for &gk in kinds {
        let g = ws.graph(gk);
        let groups = group_count(&g, &filter, key);
        let total: usize = groups.iter().map(|(_, c)| c).sum();
        let _ = writeln!(
            text,
            "{gk}: {total} matching nodes in {} groups",
            groups.len()
        );
        let mut t = Table::new(&[(group_by, Align::Left), ("count", Align::Right)]);
        for (name, c) in groups.iter().take(top) {
            t.row(vec![name.clone(), c.to_string()]);
        }
        text.push_str(&t.render());
        text.push('\n');
        let rows: Vec<CountRow> = groups
            .into_iter()
            .take(top)
            .map(|(group, count)| CountRow { group, count })
            .collect();
        json.push(json!({ "graph": gk.as_str(), "total": total, "groups": rows }));
    }
    Ok(Report {
        text,
        json: Value::Array(json),
    })
}

pub fn export_views(
    ws: &Workspace,
    kinds: &[GraphKind],
    to: &str,
    out: &Path,
) -> Result<Vec<PathBuf>> {
    let format: ExportFormat = to
        .parse()
        .map_err(|e: io::ExportError| bad_input(e.to_string()))?;
    let mut written = Vec::new();
    for &kind in kinds {
        let g: std::sync::Arc<SemanticCodeGraph> = ws.graph(kind);
        let name = kind.as_str().to_lowercase();
        let target = if format == ExportFormat::Csv {
            out.join(name)
        } else {
            out.join(format!("{name}.{}", format.extension()))
        };
        written.extend(export(&g, format, &target, &[])?);
    }
    Ok(written)
}

pub fn require_scg_only(kinds: &[GraphKind], command: &str) -> Result<()> {
    if kinds.iter().any(|k| *k != GraphKind::Scg) {
        bail!("{command} needs DECLARATION parents and full successor sets, so it only runs on the SCG");
    }
    Ok(())
}
