//! Reference proto3 implementation of the storage schema (prost, derived
//! from the schema text by hand) plus a random file generator.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scg_core::model::{Edge, EdgeType, GraphNode, NodeKind, SemanticGraphFile, SourceLocation};

#[derive(Clone, PartialEq, prost::Message)]
pub struct Location {
    #[prost(string, tag = "1")]
    pub uri: String,
    #[prost(int32, tag = "2")]
    pub start_line: i32,
    #[prost(int32, tag = "3")]
    pub start_character: i32,
    #[prost(int32, tag = "4")]
    pub end_line: i32,
    #[prost(int32, tag = "5")]
    pub end_character: i32,
}

#[derive(Clone, PartialEq, prost::Message)]
pub struct PbEdge {
    #[prost(string, tag = "1")]
    pub to: String,
    #[prost(string, tag = "2")]
    pub r#type: String,
    #[prost(message, optional, tag = "3")]
    pub location: Option<Location>,
    #[prost(btree_map = "string, string", tag = "4")]
    pub properties: BTreeMap<String, String>,
}

#[derive(Clone, PartialEq, prost::Message)]
pub struct PbNode {
    #[prost(string, tag = "1")]
    pub id: String,
    #[prost(string, tag = "2")]
    pub kind: String,
    #[prost(message, optional, tag = "3")]
    pub location: Option<Location>,
    #[prost(btree_map = "string, string", tag = "4")]
    pub properties: BTreeMap<String, String>,
    #[prost(string, tag = "5")]
    pub display_name: String,
    #[prost(message, repeated, tag = "6")]
    pub edges: Vec<PbEdge>,
}

#[derive(Clone, PartialEq, prost::Message)]
pub struct PbFile {
    #[prost(string, tag = "1")]
    pub uri: String,
    #[prost(message, repeated, tag = "2")]
    pub nodes: Vec<PbNode>,
}

fn pb_location(l: &SourceLocation) -> Location {
    Location {
        uri: l.uri.clone(),
        start_line: l.start_line,
        start_character: l.start_character,
        end_line: l.end_line,
        end_character: l.end_character,
    }
}

pub fn to_pb(f: &SemanticGraphFile) -> PbFile {
    PbFile {
        uri: f.uri.clone(),
        nodes: f
            .nodes
            .iter()
            .map(|n| PbNode {
                id: n.id.to_string(),
                kind: n.kind.as_str().to_string(),
                location: n.location.as_ref().map(pb_location),
                properties: n.properties.clone(),
                display_name: n.display_name.clone(),
                edges: n
                    .edges
                    .iter()
                    .map(|e| PbEdge {
                        to: e.to.to_string(),
                        r#type: e.edge_type.as_str().to_string(),
                        location: e.location.as_ref().map(pb_location),
                        properties: e.properties.clone(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

const WORDS: &[&str] = &[
    "a",
    "Foo",
    "bar",
    "qux_1",
    "Zeta",
    "é",
    "日本",
    "x$y",
    "<init>",
    "long_name_with_many_chars",
];

fn word(rng: &mut ChaCha8Rng) -> String {
    WORDS[rng.random_range(0..WORDS.len())].to_string()
}

fn coordinate(rng: &mut ChaCha8Rng) -> i32 {
    match rng.random_range(0..10) {
        0 => 0,
        1 => -rng.random_range(1..1000),
        2 => i32::MAX,
        3 => i32::MIN,
        _ => rng.random_range(0..100_000),
    }
}

fn location(rng: &mut ChaCha8Rng) -> Option<SourceLocation> {
    match rng.random_range(0..5) {
        0 => None,
        1 => Some(SourceLocation::default()),
        _ => Some(SourceLocation {
            uri: format!("src/{}.java", word(rng)),
            start_line: coordinate(rng),
            start_character: coordinate(rng),
            end_line: coordinate(rng),
            end_character: coordinate(rng),
        }),
    }
}

fn properties(rng: &mut ChaCha8Rng) -> BTreeMap<String, String> {
    (0..rng.random_range(0..4))
        .map(|_| {
            (
                word(rng),
                if rng.random_bool(0.2) {
                    String::new()
                } else {
                    word(rng)
                },
            )
        })
        .collect()
}

/// A file exercising every field: unknown kinds and edge types, absent and
/// all-default locations, negative and extreme coordinates, empty strings,
/// non-ASCII text and property maps.
pub fn random_file(seed: u64) -> SemanticGraphFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let node_count = rng.random_range(0..12);
    let mut nodes = Vec::new();
    for i in 0..node_count {
        let kind = match rng.random_range(0..14) {
            12 => NodeKind::Other("CUSTOM_KIND".into()),
            13 => NodeKind::Other(String::new()),
            k => NodeKind::KNOWN[k].clone(),
        };
        let mut n = GraphNode::new(format!("p/{}{i}#", word(&mut rng)), kind, word(&mut rng));
        if rng.random_bool(0.1) {
            n.display_name.clear();
        }
        n.location = location(&mut rng);
        n.properties = properties(&mut rng);
        for _ in 0..rng.random_range(0..6) {
            let edge_type = match rng.random_range(0..10) {
                8 => EdgeType::from("AGGREGATION"),
                9 => EdgeType::Other("SOMETHING_ELSE".into()),
                k => EdgeType::KNOWN[k].clone(),
            };
            n.edges.push(Edge {
                to: format!("p/{}#", word(&mut rng)).into(),
                edge_type,
                location: location(&mut rng),
                properties: properties(&mut rng),
            });
        }
        nodes.push(n);
    }
    let uri = if seed == 0 {
        String::new()
    } else {
        format!("src/p/F{seed}.java")
    };
    SemanticGraphFile::new(uri, nodes)
}

pub fn fixtures_dir() -> PathBuf {
    // resolves from either crate in the workspace
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

/// Runs `protoc` against the schema with `mode` (`--encode` or
/// `--decode`). `None` when protoc is not installed.
pub fn protoc(mode: &str, input: &[u8]) -> Option<Result<Vec<u8>, String>> {
    let dir = fixtures_dir();
    let child = Command::new("protoc")
        .arg(format!("{mode}=SemanticGraphFile"))
        .arg(format!("--proto_path={}", dir.display()))
        .arg("semanticgraph.proto")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn();
    let mut child = match child {
        Ok(c) => c,
        Err(_) => return None,
    };
    let run = || -> Result<Vec<u8>, String> {
        child
            .stdin
            .take()
            .expect("stdin")
            .write_all(input)
            .map_err(|e| e.to_string())?;
        let out = child.wait_with_output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        Ok(out.stdout)
    };
    Some(run())
}
