//! A loaded graph directory plus lazily derived views.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use anyhow::{Context, Result};
use scg_core::derive::GraphKind;
use scg_core::io::{list_graph_files, load_dir, LoadOptions};
use scg_core::model::SemanticCodeGraph;
use sha2::{Digest, Sha256};

pub struct Workspace {
    pub data_dir: PathBuf,
    options: LoadOptions,
    hash: String,
    scg: Arc<SemanticCodeGraph>,
    /// Per-file decode failures from the last load.
    pub failures: Vec<String>,
    derived: Mutex<HashMap<GraphKind, Arc<SemanticCodeGraph>>>,
}

/// SHA-256 over every graph file's relative path and bytes, in path order.
pub fn content_hash(dir: &Path) -> Result<String> {
    let mut h = Sha256::new();
    for p in list_graph_files(dir)? {
        let rel = p.strip_prefix(dir).unwrap_or(&p);
        h.update(rel.to_string_lossy().as_bytes());
        h.update([0]);
        let bytes = fs::read(&p).with_context(|| format!("cannot read {}", p.display()))?;
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    Ok(format!("{:x}", h.finalize()))
}

impl Workspace {
    pub fn open(data_dir: &Path, options: LoadOptions) -> Result<Self> {
        let hash = content_hash(data_dir)?;
        let loaded = load_dir(data_dir, &options)?;
        log::debug!(
            "loaded {} files, {} nodes from {} (content {hash})",
            loaded.files,
            loaded.graph.node_count(),
            data_dir.display()
        );
        Ok(Workspace {
            data_dir: data_dir.to_path_buf(),
            options,
            hash,
            scg: Arc::new(loaded.graph),
            failures: loaded.failures.iter().map(|e| e.to_string()).collect(),
            derived: Mutex::new(HashMap::new()),
        })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn scg(&self) -> &SemanticCodeGraph {
        &self.scg
    }

    /// The requested view, derived on first use and cached.
    pub fn graph(&self, kind: GraphKind) -> Arc<SemanticCodeGraph> {
        if kind == GraphKind::Scg {
            return self.scg.clone();
        }
        let mut cache = self.derived.lock().expect("cache lock");
        cache
            .entry(kind)
            .or_insert_with(|| {
                log::debug!("deriving {kind} view");
                Arc::new(kind.derive(&self.scg))
            })
            .clone()
    }

    pub fn cached_views(&self) -> usize {
        self.derived.lock().expect("cache lock").len()
    }

    /// Reloads when the directory content changed; derived views are dropped
    /// with the old graph. Returns whether a reload happened.
    pub fn refresh(&mut self) -> Result<bool> {
        let hash = content_hash(&self.data_dir)?;
        if hash == self.hash {
            return Ok(false);
        }
        *self = Workspace::open(&self.data_dir.clone(), self.options.clone())?;
        Ok(true)
    }
}
