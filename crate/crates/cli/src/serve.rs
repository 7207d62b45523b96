//! Read-only HTTP/JSON query service over a loaded workspace.
//!
//! Node ids contain `/` and `#`; clients percent-encode them in paths and
//! query strings. Every response is JSON; errors are `{"error": "..."}`
//! with 400 for malformed parameters and 404 for unknown ids or no path.

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde_json::json;

use scg_core::derive::GraphKind;
use scg_core::metrics::{distributions, summary};
use scg_core::model::{EdgeType, SemanticCodeGraph};
use scg_core::query::{self, Direction, QueryError, SEARCH_LIMIT};

use crate::workspace::Workspace;

pub const DEFAULT_NEIGHBOR_LIMIT: usize = 200;
pub const DEFAULT_DEPTH: usize = 3;
pub const MAX_DEPTH: usize = 32;

type Params = Query<HashMap<String, String>>;

pub enum ApiError {
    BadRequest(String),
    NotFound(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, msg) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
        };
        (status, Json(json!({ "error": msg }))).into_response()
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        match e {
            QueryError::UnknownNode(_) => ApiError::NotFound(e.to_string()),
            QueryError::InvalidParam { .. } => ApiError::BadRequest(e.to_string()),
        }
    }
}

type ApiResult = Result<Response, ApiError>;

fn ok<T: serde::Serialize>(v: T) -> ApiResult {
    Ok(Json(v).into_response())
}

fn required<'a>(p: &'a HashMap<String, String>, name: &str) -> Result<&'a str, ApiError> {
    p.get(name)
        .map(String::as_str)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| ApiError::BadRequest(format!("missing parameter {name:?}")))
}

fn number(p: &HashMap<String, String>, name: &str, default: usize) -> Result<usize, ApiError> {
    match p.get(name) {
        None => Ok(default),
        Some(v) => v.parse().map_err(|_| {
            ApiError::BadRequest(format!("{name} must be a non-negative integer, got {v:?}"))
        }),
    }
}

fn graph(ws: &Workspace, p: &HashMap<String, String>) -> Result<Arc<SemanticCodeGraph>, ApiError> {
    let kind = match p.get("graph") {
        None => GraphKind::Scg,
        Some(g) => g.parse().map_err(ApiError::BadRequest)?,
    };
    Ok(ws.graph(kind))
}

fn types(p: &HashMap<String, String>) -> Result<Vec<EdgeType>, ApiError> {
    Ok(query::parse_edge_types(
        p.get("types").map(String::as_str).unwrap_or(""),
    )?)
}

async fn get_summary(State(ws): State<Arc<Workspace>>, Query(p): Params) -> ApiResult {
    let g = graph(&ws, &p)?;
    ok(
        json!({ "summary": summary(&g), "distributions": distributions(&g), "contentHash": ws.hash() }),
    )
}

async fn get_search(State(ws): State<Arc<Workspace>>, Query(p): Params) -> ApiResult {
    let g = graph(&ws, &p)?;
    let q = required(&p, "q")?;
    let limit = number(&p, "limit", SEARCH_LIMIT)?.min(SEARCH_LIMIT);
    ok(query::search(&g, q, limit))
}

async fn get_node(
    State(ws): State<Arc<Workspace>>,
    Path(rest): Path<String>,
    Query(p): Params,
) -> ApiResult {
    let g = graph(&ws, &p)?;
    // an id may itself end in a slash (packages), so the suffix only
    // selects the neighbour view when what precedes it is a known id
    if let Some(id) = rest
        .strip_suffix("/neighbors")
        .filter(|id| g.get(id).is_some())
    {
        let dir = match p.get("direction") {
            None => Direction::Out,
            Some(d) => d.parse()?,
        };
        let limit = number(&p, "limit", DEFAULT_NEIGHBOR_LIMIT)?;
        return ok(query::neighbors(&g, id, dir, &types(&p)?, limit)?);
    }
    ok(query::node(&g, &rest)?)
}

async fn get_hierarchy(State(ws): State<Arc<Workspace>>, Query(p): Params) -> ApiResult {
    let g = graph(&ws, &p)?;
    let root = required(&p, "root")?;
    let edge = match p.get("edge") {
        None => EdgeType::Call,
        Some(e) => match query::parse_edge_types(e)?.as_slice() {
            [one] => one.clone(),
            _ => {
                return Err(ApiError::BadRequest(format!(
                    "edge must name one edge type, got {e:?}"
                )))
            }
        },
    };
    let dir = match p.get("direction") {
        None => Direction::Out,
        Some(d) => d.parse()?,
    };
    let depth = number(&p, "depth", DEFAULT_DEPTH)?;
    if depth > MAX_DEPTH {
        return Err(ApiError::BadRequest(format!(
            "depth is capped at {MAX_DEPTH}"
        )));
    }
    ok(query::hierarchy(&g, root, &edge, dir, depth)?)
}

async fn get_path(State(ws): State<Arc<Workspace>>, Query(p): Params) -> ApiResult {
    let g = graph(&ws, &p)?;
    let (from, to) = (required(&p, "from")?, required(&p, "to")?);
    match query::shortest_path(&g, from, to, &types(&p)?)? {
        Some(path) => ok(path),
        None => Err(ApiError::NotFound(format!(
            "no path from {from:?} to {to:?}"
        ))),
    }
}

pub fn router(ws: Arc<Workspace>) -> Router {
    Router::new()
        .route("/summary", get(get_summary))
        .route("/search", get(get_search))
        .route("/node/{*id}", get(get_node))
        .route("/hierarchy", get(get_hierarchy))
        .route("/path", get(get_path))
        .with_state(ws)
}

pub async fn serve(ws: Workspace, host: &str, port: u16) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    eprintln!(
        "serving {} on http://{}",
        ws.data_dir.display(),
        listener.local_addr()?
    );
    axum::serve(listener, router(Arc::new(ws))).await?;
    Ok(())
}
