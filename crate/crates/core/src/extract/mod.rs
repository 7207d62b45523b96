//! Front end for a Java subset: lexing, parsing, symbol tables, semantic
//! resolution, and emission of one [`SemanticGraphFile`] per source file.
//!
//! Supported: packages, imports, classes/interfaces/enums (nested too),
//! type parameters, fields, methods, constructors, and method bodies made
//! of local declarations, calls, field accesses, object creation, returns,
//! `if`/`while`/`for`/`try`/`throw` and blocks. Lambdas, method references,
//! `switch`, anonymous and local classes, records and annotations are
//! skipped with a diagnostic.

pub mod ast;
mod emit;
mod lexer;
mod parser;
mod symbols;

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

use crate::model::SemanticGraphFile;
use crate::par;

pub use ast::Pos;
pub use emit::emit_file;
pub use parser::{parse_source, ParsedFile};
pub use symbols::{
    build_symbol_table, FieldInfo, Lookup, MethodInfo, SymbolTable, TypeIdx, TypeInfo, TypeTarget,
};

pub const SOURCE_EXTENSION: &str = "java";

/// A file-level failure: the file produces no graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    /// Zero-based.
    pub line: u32,
    /// Zero-based, in characters.
    pub column: u32,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            column: pos.col,
            message: message.into(),
        }
    }
}

/// A recoverable problem: a skipped construct or an unresolved name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub uri: String,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl Diagnostic {
    pub fn new(uri: &str, pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            uri: uri.to_string(),
            line: pos.line,
            column: pos.col,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // one-based for humans and editors
        write!(
            f,
            "{}:{}:{}: {}",
            self.uri,
            self.line + 1,
            self.column + 1,
            self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileFailure {
    pub uri: String,
    pub error: ParseError,
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Output of a project extraction.
#[derive(Debug, Clone, Default)]
pub struct Extraction {
    /// One per successfully parsed file, ordered by uri.
    pub files: Vec<SemanticGraphFile>,
    pub diagnostics: Vec<Diagnostic>,
    /// Files that failed to parse; they contribute no nodes.
    pub failures: Vec<FileFailure>,
}

impl Extraction {
    pub fn node_count(&self) -> usize {
        self.files.iter().map(|f| f.nodes.len()).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.files.iter().map(SemanticGraphFile::edge_count).sum()
    }
}

/// Extracts every `.java` file below `root`. URIs are relative to `root`
/// with `/` separators.
pub fn extract(root: &Path) -> Result<Extraction, ExtractError> {
    let io_err = |path: &Path, source| ExtractError::Io {
        path: path.to_path_buf(),
        source,
    };
    std::fs::read_dir(root).map_err(|e| io_err(root, e))?;
    let mut paths = Vec::new();
    for entry in WalkDir::new(root).follow_links(true) {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            io_err(&path, e.into())
        })?;
        let is_source = entry.file_type().is_file()
            && entry
                .path()
                .extension()
                .is_some_and(|x| x == SOURCE_EXTENSION);
        if is_source {
            paths.push(entry.into_path());
        }
    }
    let mut sources = Vec::with_capacity(paths.len());
    for path in &paths {
        let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
        let rel = path.strip_prefix(root).unwrap_or(path);
        let uri = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        sources.push((uri, bytes));
    }
    Ok(extract_bytes(sources))
}

/// Extracts from in-memory sources given as `(uri, text)` pairs.
pub fn extract_sources<U: AsRef<str>, T: AsRef<str>>(sources: &[(U, T)]) -> Extraction {
    extract_bytes(
        sources
            .iter()
            .map(|(u, t)| (u.as_ref().to_string(), t.as_ref().as_bytes().to_vec()))
            .collect(),
    )
}

fn extract_bytes(mut sources: Vec<(String, Vec<u8>)>) -> Extraction {
    sources.sort_by(|a, b| a.0.cmp(&b.0));
    let parsed = par::map(&sources, |(uri, bytes)| match std::str::from_utf8(bytes) {
        Ok(text) => parse_source(text, uri).map_err(|error| FileFailure {
            uri: uri.clone(),
            error,
        }),
        Err(e) => Err(FileFailure {
            uri: uri.clone(),
            error: ParseError::new(Pos::default(), format!("file is not valid UTF-8: {e}")),
        }),
    });
    let mut out = Extraction::default();
    let mut ok = Vec::new();
    for p in parsed {
        match p {
            Ok(f) => ok.push(f),
            Err(f) => out.failures.push(f),
        }
    }
    for f in &ok {
        out.diagnostics.extend(f.diagnostics.iter().cloned());
    }
    let table = build_symbol_table(&ok);
    out.diagnostics.extend(table.diagnostics().iter().cloned());
    let emitted = par::map_range(ok.len(), |i| emit_file(&table, i));
    for (file, diags) in emitted {
        out.files.push(file);
        out.diagnostics.extend(diags);
    }
    out.diagnostics.sort();
    out
}
