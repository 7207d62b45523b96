use std::collections::HashMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::model::{props, EdgeRef, GraphNode, SemanticCodeGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    GraphMl,
    Gdf,
    Dot,
    Csv,
    Jsonl,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::GraphMl => "graphml",
            ExportFormat::Gdf => "gdf",
            ExportFormat::Dot => "dot",
            ExportFormat::Csv => "csv",
            ExportFormat::Jsonl => "jsonl",
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for ExportFormat {
    type Err = ExportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(ExportFormat::GraphMl),
            "gdf" => Ok(ExportFormat::Gdf),
            "dot" => Ok(ExportFormat::Dot),
            "csv" => Ok(ExportFormat::Csv),
            "jsonl" => Ok(ExportFormat::Jsonl),
            _ => Err(ExportError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("unknown export format {0:?} (expected graphml, gdf, dot, csv or jsonl)")]
    UnknownFormat(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<io::Error> for ExportError {
    fn from(source: io::Error) -> Self {
        ExportError::Io {
            path: PathBuf::new(),
            source,
        }
    }
}

/// Additional per-node attribute (e.g. a community label), indexed like
/// `graph.nodes()`.
#[derive(Debug, Clone)]
pub struct NodeAttribute {
    pub name: String,
    pub values: Vec<String>,
}

fn loc_of(n: &GraphNode) -> String {
    n.loc().to_string()
}

fn package_of(n: &GraphNode) -> &str {
    n.property(props::PACKAGE).unwrap_or("")
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Edge ids `from|type|to|ordinal`, the ordinal numbering parallel edges.
fn edge_ids(graph: &SemanticCodeGraph) -> Vec<(EdgeRef, String)> {
    let mut seen: HashMap<(usize, usize, &str), usize> = HashMap::new();
    graph
        .edges()
        .map(|r| {
            let ty = graph.edge(r).edge_type.as_str();
            let ord = seen.entry((r.from, r.to, ty)).or_insert(0);
            let id = format!(
                "{}|{}|{}|{}",
                graph.node(r.from).id,
                ty,
                graph.node(r.to).id,
                ord
            );
            *ord += 1;
            (r, id)
        })
        .collect()
}

pub fn write_graphml<W: Write>(
    graph: &SemanticCodeGraph,
    extra: &[NodeAttribute],
    w: &mut W,
) -> io::Result<()> {
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        w,
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#
    )?;
    for (key, ty) in [
        ("kind", "string"),
        ("displayName", "string"),
        ("loc", "long"),
        ("package", "string"),
    ] {
        writeln!(
            w,
            r#"  <key id="{key}" for="node" attr.name="{key}" attr.type="{ty}"/>"#
        )?;
    }
    for a in extra {
        let name = xml_escape(&a.name);
        writeln!(
            w,
            r#"  <key id="{name}" for="node" attr.name="{name}" attr.type="string"/>"#
        )?;
    }
    writeln!(
        w,
        r#"  <key id="type" for="edge" attr.name="type" attr.type="string"/>"#
    )?;
    writeln!(w, r#"  <graph id="scg" edgedefault="directed">"#)?;
    for (i, n) in graph.nodes().iter().enumerate() {
        write!(w, r#"    <node id="{}">"#, xml_escape(n.id.as_str()))?;
        write!(
            w,
            r#"<data key="kind">{}</data>"#,
            xml_escape(n.kind.as_str())
        )?;
        write!(
            w,
            r#"<data key="displayName">{}</data>"#,
            xml_escape(&n.display_name)
        )?;
        write!(w, r#"<data key="loc">{}</data>"#, loc_of(n))?;
        write!(
            w,
            r#"<data key="package">{}</data>"#,
            xml_escape(package_of(n))
        )?;
        for a in extra {
            let v = a.values.get(i).map(String::as_str).unwrap_or("");
            write!(
                w,
                r#"<data key="{}">{}</data>"#,
                xml_escape(&a.name),
                xml_escape(v)
            )?;
        }
        writeln!(w, "</node>")?;
    }
    for (r, id) in edge_ids(graph) {
        writeln!(
            w,
            r#"    <edge id="{}" source="{}" target="{}"><data key="type">{}</data></edge>"#,
            xml_escape(&id),
            xml_escape(graph.node(r.from).id.as_str()),
            xml_escape(graph.node(r.to).id.as_str()),
            xml_escape(graph.edge(r).edge_type.as_str()),
        )?;
    }
    writeln!(w, "  </graph>")?;
    writeln!(w, "</graphml>")
}

fn gdf_quote(s: &str) -> String {
    format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
}

pub fn write_gdf<W: Write>(
    graph: &SemanticCodeGraph,
    extra: &[NodeAttribute],
    w: &mut W,
) -> io::Result<()> {
    write!(
        w,
        "nodedef>name VARCHAR,label VARCHAR,kind VARCHAR,loc INTEGER,package VARCHAR"
    )?;
    for a in extra {
        write!(w, ",{} VARCHAR", a.name)?;
    }
    writeln!(w)?;
    for (i, n) in graph.nodes().iter().enumerate() {
        write!(
            w,
            "{},{},{},{},{}",
            gdf_quote(n.id.as_str()),
            gdf_quote(&n.display_name),
            n.kind,
            loc_of(n),
            gdf_quote(package_of(n))
        )?;
        for a in extra {
            write!(
                w,
                ",{}",
                gdf_quote(a.values.get(i).map(String::as_str).unwrap_or(""))
            )?;
        }
        writeln!(w)?;
    }
    writeln!(
        w,
        "edgedef>node1 VARCHAR,node2 VARCHAR,directed BOOLEAN,type VARCHAR"
    )?;
    for r in graph.edges() {
        writeln!(
            w,
            "{},{},true,{}",
            gdf_quote(graph.node(r.from).id.as_str()),
            gdf_quote(graph.node(r.to).id.as_str()),
            graph.edge(r).edge_type
        )?;
    }
    Ok(())
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn write_dot<W: Write>(
    graph: &SemanticCodeGraph,
    extra: &[NodeAttribute],
    w: &mut W,
) -> io::Result<()> {
    if graph.is_empty() {
        return writeln!(w, "digraph scg {{}}");
    }
    writeln!(w, "digraph scg {{")?;
    for (i, n) in graph.nodes().iter().enumerate() {
        write!(
            w,
            "  {} [label={}, kind={}, loc={}, package={}",
            dot_quote(n.id.as_str()),
            dot_quote(&n.display_name),
            dot_quote(n.kind.as_str()),
            loc_of(n),
            dot_quote(package_of(n))
        )?;
        for a in extra {
            write!(
                w,
                ", {}={}",
                a.name,
                dot_quote(a.values.get(i).map(String::as_str).unwrap_or(""))
            )?;
        }
        writeln!(w, "];")?;
    }
    for r in graph.edges() {
        writeln!(
            w,
            "  {} -> {} [type={}];",
            dot_quote(graph.node(r.from).id.as_str()),
            dot_quote(graph.node(r.to).id.as_str()),
            dot_quote(graph.edge(r).edge_type.as_str())
        )?;
    }
    writeln!(w, "}}")
}

pub const NODE_CSV_HEADER: [&str; 11] = [
    "id",
    "kind",
    "displayName",
    "loc",
    "package",
    "file",
    "uri",
    "startLine",
    "startCharacter",
    "endLine",
    "endCharacter",
];

pub const EDGE_CSV_HEADER: [&str; 8] = [
    "from",
    "to",
    "type",
    "uri",
    "startLine",
    "startCharacter",
    "endLine",
    "endCharacter",
];

pub fn write_csv<N: Write, E: Write>(
    graph: &SemanticCodeGraph,
    nodes: N,
    edges: E,
) -> Result<(), ExportError> {
    let mut nw = csv::Writer::from_writer(nodes);
    nw.write_record(NODE_CSV_HEADER)?;
    for n in graph.nodes() {
        let l = n.location.clone().unwrap_or_default();
        nw.write_record([
            n.id.as_str(),
            n.kind.as_str(),
            &n.display_name,
            &loc_of(n),
            package_of(n),
            n.property(props::FILE).unwrap_or(""),
            &l.uri,
            &l.start_line.to_string(),
            &l.start_character.to_string(),
            &l.end_line.to_string(),
            &l.end_character.to_string(),
        ])?;
    }
    nw.flush()?;

    let mut ew = csv::Writer::from_writer(edges);
    ew.write_record(EDGE_CSV_HEADER)?;
    for r in graph.edges() {
        let e = graph.edge(r);
        let l = e.location.clone().unwrap_or_default();
        ew.write_record([
            graph.node(r.from).id.as_str(),
            graph.node(r.to).id.as_str(),
            e.edge_type.as_str(),
            &l.uri,
            &l.start_line.to_string(),
            &l.start_character.to_string(),
            &l.end_line.to_string(),
            &l.end_character.to_string(),
        ])?;
    }
    ew.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write>(graph: &SemanticCodeGraph, w: &mut W) -> Result<(), ExportError> {
    for n in graph.nodes() {
        serde_json::to_writer(&mut *w, n)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, ExportError> {
    let io = |source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    File::create(path).map(BufWriter::new).map_err(io)
}

/// Writes `graph` to `target`. CSV treats `target` as a directory and
/// writes `nodes.csv` and `edges.csv` into it; every other format writes a
/// single file. Returns the paths written.
pub fn export(
    graph: &SemanticCodeGraph,
    format: ExportFormat,
    target: &Path,
    extra: &[NodeAttribute],
) -> Result<Vec<PathBuf>, ExportError> {
    let with_path = |path: &Path, e: ExportError| match e {
        ExportError::Io { source, .. } => ExportError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    };
    if format == ExportFormat::Csv {
        let nodes = target.join("nodes.csv");
        let edges = target.join("edges.csv");
        let (nw, ew) = (create(&nodes)?, create(&edges)?);
        write_csv(graph, nw, ew).map_err(|e| with_path(target, e))?;
        return Ok(vec![nodes, edges]);
    }
    let mut w = create(target)?;
    let result = match format {
        ExportFormat::GraphMl => write_graphml(graph, extra, &mut w).map_err(ExportError::from),
        ExportFormat::Gdf => write_gdf(graph, extra, &mut w).map_err(ExportError::from),
        ExportFormat::Dot => write_dot(graph, extra, &mut w).map_err(ExportError::from),
        ExportFormat::Jsonl => write_jsonl(graph, &mut w),
        ExportFormat::Csv => unreachable!(),
    };
    result
        .and_then(|_| w.flush().map_err(ExportError::from))
        .map_err(|e| with_path(target, e))?;
    Ok(vec![target.to_path_buf()])
}
