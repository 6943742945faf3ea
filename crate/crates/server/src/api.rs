//! HTTP/JSON API over the analysis cache.

use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cache::{CacheError, CacheRoot, DatasetCache, SCHEMA_VERSION};
use crate::jobs::{JobFailure, JobResult, Jobs, Outcome};
use crate::pipeline::{self, PipelineError, ViewRequest};

pub const SCHEMA_HEADER: &str = "x-schema-version";
pub const DEFAULT_WAIT: Duration = Duration::from_secs(2);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub error: String,
    pub detail: String,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, detail: impl Into<String>) -> Self {
        ApiError {
            status,
            error: error.into(),
            detail: detail.into(),
        }
    }

    pub fn bad_request(detail: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", detail)
    }

    pub fn not_found(detail: impl Into<String>) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", detail)
    }
}

impl From<PipelineError> for ApiError {
    fn from(e: PipelineError) -> Self {
        use motifpix_core::Error as Core;
        let detail = e.to_string();
        match e {
            PipelineError::Cache(CacheError::UnknownDataset(_) | CacheError::InvalidId(_)) => ApiError::not_found(detail),
            PipelineError::Cache(CacheError::Missing { .. }) => ApiError::new(StatusCode::NOT_FOUND, "not_computed", detail),
            PipelineError::Cache(CacheError::Stale { .. }) => {
                ApiError::new(StatusCode::CONFLICT, "manifest_mismatch", detail)
            }
            PipelineError::SnapshotOutOfRange { .. } => ApiError::not_found(detail),
            PipelineError::Invalid(_) => ApiError::bad_request(detail),
            PipelineError::Core(
                Core::InvalidParameter(_)
                | Core::UnknownStrategy(_)
                | Core::UnknownCluster(_)
                | Core::MissingClusters
                | Core::MissingMetric
                | Core::InvalidGraphletSize(_)
                | Core::DimensionMismatch { .. }
                | Core::NothingToRender,
            ) => ApiError::bad_request(detail),
            _ => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", detail),
        }
    }
}

impl From<ApiError> for JobFailure {
    fn from(e: ApiError) -> Self {
        JobFailure {
            status: e.status.as_u16(),
            error: e.error,
            detail: e.detail,
        }
    }
}

impl From<JobFailure> for ApiError {
    fn from(f: JobFailure) -> Self {
        ApiError {
            status: StatusCode::from_u16(f.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR),
            error: f.error,
            detail: f.detail,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

#[derive(Clone)]
pub struct AppState {
    pub root: CacheRoot,
    pub jobs: Jobs,
}

impl AppState {
    pub fn new(root: CacheRoot, workers: usize, wait: Duration) -> Self {
        AppState {
            root,
            jobs: Jobs::new(workers, wait),
        }
    }

    fn open(&self, id: &str) -> Result<DatasetCache, ApiError> {
        self.root.open(id).map_err(|e| PipelineError::from(e).into())
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/datasets", get(list_datasets))
        .route("/api/datasets/{id}/census", get(census))
        .route("/api/datasets/{id}/census/view", post(census_view))
        .route("/api/datasets/{id}/snapshots/{t}/gdv", get(gdv))
        .route("/api/datasets/{id}/snapshots/{t}/gdv/view", post(gdv_view))
        .route("/api/datasets/{id}/snapshots/{t}/graph", get(graph))
        .route("/api/datasets/{id}/snapshots/{t}/metrics", get(metrics))
        .route("/api/jobs/{id}", get(job))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
        .layer(axum::middleware::map_response(schema_header))
        .with_state(state)
}

async fn schema_header(mut res: Response) -> Response {
    res.headers_mut()
        .insert(SCHEMA_HEADER, HeaderValue::from(SCHEMA_VERSION));
    res
}

fn to_value<T: Serialize>(v: T) -> JobResult {
    serde_json::to_value(v).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()).into())
}

fn wrap<T: Serialize>(r: Result<T, PipelineError>) -> JobResult {
    match r {
        Ok(v) => to_value(v),
        Err(e) => Err(ApiError::from(e).into()),
    }
}

/// Runs `work` on the job pool and answers with its result, or with 202 and
/// a job id when it outlives the wait budget.
async fn deferred<F>(state: &AppState, key: String, work: F) -> Result<Response, ApiError>
where
    F: FnOnce() -> JobResult + Send + 'static,
{
    match state.jobs.run_or_defer(key, work).await {
        Outcome::Ready(Ok(v)) => Ok(Json(v).into_response()),
        Outcome::Ready(Err(f)) => Err(f.into()),
        Outcome::Pending(id) => {
            let poll = format!("/api/jobs/{id}");
            let body = json!({ "jobId": id, "status": "running", "poll": poll });
            let mut res = (StatusCode::ACCEPTED, Json(body)).into_response();
            if let Ok(v) = HeaderValue::from_str(&poll) {
                res.headers_mut().insert(header::LOCATION, v);
            }
            Ok(res)
        }
    }
}

fn parse_t(raw: &str) -> Result<usize, ApiError> {
    raw.parse()
        .map_err(|_| ApiError::bad_request(format!("snapshot index must be a non-negative integer, got `{raw}`")))
}

fn parse_view(body: &Bytes) -> Result<ViewRequest, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(ViewRequest::default());
    }
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid view request: {e}")))
}

async fn list_datasets(State(state): State<AppState>) -> Result<Response, ApiError> {
    let root = state.root.clone();
    let list = tokio::task::spawn_blocking(move || root.datasets())
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
        .map_err(PipelineError::from)?;
    Ok(Json(list).into_response())
}

async fn census(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let ds = state.open(&id)?;
    let key = format!("census:{id}");
    deferred(&state, key, move || wrap(pipeline::load_census(&ds))).await
}

async fn census_view(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req = parse_view(&body)?;
    let ds = state.open(&id)?;
    let key = format!("census-view:{id}:{}", serde_json::to_string(&req).unwrap_or_default());
    deferred(&state, key, move || {
        wrap((|| {
            let matrix = pipeline::load_census(&ds)?;
            let dn = pipeline::load_network(&ds)?;
            let metrics = pipeline::load_metrics(&ds, &dn)?;
            pipeline::census_view(&matrix, &metrics, &req)
        })())
    })
    .await
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct GdvQuery {
    max_size: Option<String>,
}

async fn gdv(
    State(state): State<AppState>,
    Path((id, t)): Path<(String, String)>,
    Query(q): Query<GdvQuery>,
) -> Result<Response, ApiError> {
    let t = parse_t(&t)?;
    let ds = state.open(&id)?;
    let k = match q.max_size {
        Some(raw) => raw
            .parse()
            .map_err(|_| ApiError::bad_request(format!("maxSize must be 4 or 5, got `{raw}`")))?,
        None => ds.manifest().max_graphlet_size,
    };
    let key = format!("gdv:{id}:{t}:{k}");
    deferred(&state, key, move || wrap(pipeline::gdv(&ds, t, k))).await
}

async fn gdv_view(
    State(state): State<AppState>,
    Path((id, t)): Path<(String, String)>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let t = parse_t(&t)?;
    let req = parse_view(&body)?;
    let ds = state.open(&id)?;
    let key = format!("gdv-view:{id}:{t}:{}", serde_json::to_string(&req).unwrap_or_default());
    deferred(&state, key, move || {
        wrap((|| {
            let k = req.max_size.unwrap_or(ds.manifest().max_graphlet_size);
            let matrix = pipeline::gdv(&ds, t, k)?;
            let dn = pipeline::load_network(&ds)?;
            let nodes = motifpix_core::metrics::node_metrics(
                pipeline::snapshot(&dn, t)?,
                motifpix_core::metrics::DEFAULT_DAMPING,
            );
            let req = ViewRequest { max_size: None, ..req };
            pipeline::gdv_view(&matrix, &nodes, &req)
        })())
    })
    .await
}

async fn graph(State(state): State<AppState>, Path((id, t)): Path<(String, String)>) -> Result<Response, ApiError> {
    let t = parse_t(&t)?;
    let ds = state.open(&id)?;
    let key = format!("graph:{id}:{t}");
    deferred(&state, key, move || wrap(pipeline::graph_payload(&ds, t))).await
}

async fn metrics(State(state): State<AppState>, Path((id, t)): Path<(String, String)>) -> Result<Response, ApiError> {
    let t = parse_t(&t)?;
    let ds = state.open(&id)?;
    let key = format!("metrics:{id}:{t}");
    deferred(&state, key, move || wrap(pipeline::snapshot_metrics(&ds, t))).await
}

async fn job(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    state
        .jobs
        .status(&id)
        .map(|info| Json(info).into_response())
        .ok_or_else(|| ApiError::not_found(format!("unknown job `{id}`")))
}
