use std::fs;
use std::path::{Path, PathBuf};

use globset::{Glob, GlobMatcher};
use thiserror::Error;
use walkdir::WalkDir;

use super::wire::{decode_file, encode_file, DecodeError};
use crate::model::{AssemblyError, SemanticCodeGraph, SemanticGraphFile};
use crate::par;

pub const EXTENSION: &str = "semanticgraph";

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: DecodeError,
    },
    #[error("invalid include pattern {pattern:?}: {message}")]
    Pattern { pattern: String, message: String },
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Glob matched against each file's source `uri`; non-matching files
    /// are left out of the graph.
    pub include: Option<String>,
}

impl LoadOptions {
    pub fn include(pattern: impl Into<String>) -> Self {
        LoadOptions {
            include: Some(pattern.into()),
        }
    }
}

#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: SemanticCodeGraph,
    /// Files decoded and kept.
    pub files: usize,
    /// Per-file failures; loading continues past them.
    pub failures: Vec<LoadError>,
}

/// Recursively lists `*.semanticgraph` files, sorted by path.
pub fn list_graph_files(dir: &Path) -> Result<Vec<PathBuf>, LoadError> {
    if !dir.is_dir() {
        return Err(LoadError::Io {
            path: dir.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        });
    }
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).follow_links(true) {
        let entry = entry.map_err(|e| LoadError::Io {
            path: e
                .path()
                .map(Path::to_path_buf)
                .unwrap_or_else(|| dir.to_path_buf()),
            source: e.into(),
        })?;
        let p = entry.path();
        if entry.file_type().is_file() && p.extension().is_some_and(|e| e == EXTENSION) {
            out.push(p.to_path_buf());
        }
    }
    out.sort();
    Ok(out)
}

fn read_one(path: &Path) -> Result<SemanticGraphFile, LoadError> {
    let bytes = fs::read(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_file(&bytes).map_err(|source| LoadError::Decode {
        path: path.to_path_buf(),
        source,
    })
}

fn matcher(options: &LoadOptions) -> Result<Option<GlobMatcher>, LoadError> {
    options
        .include
        .as_deref()
        .map(|p| {
            Glob::new(p)
                .map(|g| g.compile_matcher())
                .map_err(|e| LoadError::Pattern {
                    pattern: p.to_string(),
                    message: e.to_string(),
                })
        })
        .transpose()
}

/// Decodes every graph file under `dir` and assembles them. Files decode
/// concurrently; assembly is the serial join.
pub fn load_dir(dir: &Path, options: &LoadOptions) -> Result<LoadedGraph, LoadError> {
    let include = matcher(options)?;
    let paths = list_graph_files(dir)?;
    let decoded = par::map(&paths, |p| read_one(p));

    let mut files = Vec::new();
    let mut failures = Vec::new();
    for result in decoded {
        match result {
            Ok(f) => {
                if include.as_ref().is_none_or(|m| m.is_match(&f.uri)) {
                    files.push(f);
                }
            }
            Err(e) => failures.push(e),
        }
    }
    let count = files.len();
    let graph = SemanticCodeGraph::assemble(files)?;
    Ok(LoadedGraph {
        graph,
        files: count,
        failures,
    })
}

/// Output path of a file's graph: the source tree mirrored under `out_dir`
/// with `.semanticgraph` appended.
pub fn graph_path(out_dir: &Path, uri: &str) -> PathBuf {
    let mut p = out_dir.to_path_buf();
    for seg in uri.split('/').filter(|s| !s.is_empty() && *s != "..") {
        p.push(seg);
    }
    let mut name = p.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".");
    name.push(EXTENSION);
    p.set_file_name(name);
    p
}

pub fn write_file(out_dir: &Path, file: &SemanticGraphFile) -> Result<PathBuf, LoadError> {
    let path = graph_path(out_dir, &file.uri);
    let io = |source| LoadError::Io {
        path: path.clone(),
        source,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(&path, encode_file(file)).map_err(io)?;
    Ok(path)
}
