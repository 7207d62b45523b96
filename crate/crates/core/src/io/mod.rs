//! Storage: the `.semanticgraph` wire format, directory loading, and
//! export to third-party graph formats.

mod export;
mod load;
mod wire;

pub use export::{
    export, write_csv, write_dot, write_gdf, write_graphml, write_jsonl, ExportError, ExportFormat,
    NodeAttribute, EDGE_CSV_HEADER, NODE_CSV_HEADER,
};
pub use load::{
    graph_path, list_graph_files, load_dir, write_file, LoadError, LoadOptions, LoadedGraph,
    EXTENSION,
};
pub use wire::{decode_file, encode_file, DecodeError, DecodeErrorKind};
