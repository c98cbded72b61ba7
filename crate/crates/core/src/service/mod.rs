//! HTTP session service.
//!
//! Each session holds a grid, an optional prepared lattice and an optional
//! graph, plus the history of operations that produced them. Requests to one
//! session are serialised through a fair mutex; distinct sessions proceed in
//! parallel. Every mutation is computed on a copy and committed only on
//! success.

mod session;
mod submit;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::{Mutex, RwLock};

use crate::graph_state::{GraphDocument, GraphState, MeasurementBasis, VertexId};
use crate::grid::{AlgorithmDocument, AlgorithmGrid};
use crate::qasm::{emit, QasmError, ThetaBinding};

pub use session::{replay, HistoryEntry, OpError, Operation, SessionState};
pub use submit::{
    endpoint_from_env, resolve_endpoint, submit, Envelope, SubmissionResult, SubmitError, ENDPOINT_VAR,
};

/// Rough cap on the memory an orbit search may use, in bytes.
const ORBIT_MEMORY_CAP: usize = 1 << 30;

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Default submission endpoint; falls back to the environment.
    pub endpoint: Option<String>,
    pub envelope: Envelope,
}

struct Session {
    state: SessionState,
    history: Vec<HistoryEntry>,
}

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Session>>>>>,
    config: Arc<ServiceConfig>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        Self {
            sessions: Arc::default(),
            config: Arc::new(config),
        }
    }

    async fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .await
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown-session", format!("no session {id}")))
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            body: json!({ "error": code, "message": message.into() }),
        }
    }

    fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.body[key] = serde_json::to_value(value).expect("plain data serialises");
        self
    }

    fn unprocessable(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, code, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn op_error(e: OpError, graph_version: u64) -> ApiError {
    match e {
        OpError::Invalid(d) => ApiError::unprocessable("invalid-grid", "grid violates its invariants").with("diagnostics", d),
        OpError::Conflict(m) => ApiError::new(StatusCode::CONFLICT, "conflict", m).with("graph_version", graph_version),
        OpError::Rejected(m) => ApiError::unprocessable("rejected", m),
    }
}

fn qasm_error(e: QasmError) -> ApiError {
    let message = e.to_string();
    match e {
        QasmError::UnboundTheta(missing) => ApiError::unprocessable("unbound-theta", message).with("missing", missing),
        QasmError::UnknownTarget(t) => ApiError::unprocessable("unknown-target", message).with("targets", t),
        QasmError::InvalidGrid(d) => ApiError::unprocessable("invalid-grid", message).with("diagnostics", d),
        _ => ApiError::unprocessable("compile", message),
    }
}

/// Parses a JSON body, reporting the failing path.
fn parse<T: DeserializeOwned>(body: &str) -> Result<T, ApiError> {
    let text = if body.trim().is_empty() { "{}" } else { body };
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        ApiError::unprocessable("bad-request", e.inner().to_string()).with("path", e.path().to_string())
    })
}

fn graph_response(g: &GraphState, version: u64) -> Response {
    let mut r = Json(GraphDocument::from(g)).into_response();
    r.headers_mut()
        .insert("x-graph-version", HeaderValue::from(version));
    r
}

/// Runs `op` against a session, committing state and history on success.
async fn mutate(app: &AppState, id: &str, op: Operation) -> Result<(SessionState, session::Outcome), ApiError> {
    let handle = app.session(id).await?;
    let mut s = handle.lock().await;
    let (next, stored, outcome) = s.state.apply(op).map_err(|e| op_error(e, s.state.graph_version))?;
    s.state = next;
    s.history.push(HistoryEntry { at: Utc::now(), op: stored });
    Ok((s.state.clone(), outcome))
}

async fn read<T>(app: &AppState, id: &str, f: impl FnOnce(&Session) -> T) -> Result<T, ApiError> {
    let handle = app.session(id).await?;
    let s = handle.lock().await;
    Ok(f(&s))
}

fn require_graph(state: &SessionState) -> Result<&GraphState, ApiError> {
    state.graph.as_ref().ok_or_else(|| {
        ApiError::new(StatusCode::CONFLICT, "no-graph", "session has no graph").with("graph_version", state.graph_version)
    })
}

async fn create_session(State(app): State<AppState>) -> impl IntoResponse {
    let id = uuid::Uuid::new_v4().to_string();
    let session = Session {
        state: SessionState::default(),
        history: Vec::new(),
    };
    app.sessions
        .write()
        .await
        .insert(id.clone(), Arc::new(Mutex::new(session)));
    (StatusCode::CREATED, Json(json!({ "id": id })))
}

async fn summary(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let body = read(&app, &id, |s| {
        json!({
            "id": id,
            "tiles": s.state.grid.tiles().len(),
            "has_lattice": s.state.lattice.is_some(),
            "has_graph": s.state.graph.is_some(),
            "graph_version": s.state.graph_version,
            "history_len": s.history.len(),
        })
    })
    .await?;
    Ok(Json(body).into_response())
}

async fn put_grid(State(app): State<AppState>, Path(id): Path<String>, body: String) -> Result<Response, ApiError> {
    let grid = AlgorithmGrid::from_json(&body).map_err(|e| match e {
        crate::grid::GridError::Parse { path, message } => {
            ApiError::unprocessable("bad-request", message).with("path", path)
        }
        other => ApiError::unprocessable("bad-request", other.to_string()),
    })?;
    let (state, _) = mutate(&app, &id, Operation::SetGrid {
        grid: AlgorithmDocument::from(&grid),
    })
    .await?;
    Ok(Json(json!({
        "metrics": state.grid.metrics(),
        "diagnostics": state.grid.validate(),
    }))
    .into_response())
}

async fn get_grid(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let doc = read(&app, &id, |s| AlgorithmDocument::from(&s.state.grid)).await?;
    Ok(Json(doc).into_response())
}

async fn metrics(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let m = read(&app, &id, |s| s.state.grid.metrics()).await?;
    Ok(Json(m).into_response())
}

async fn layout(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let (state, _) = mutate(&app, &id, Operation::Layout).await?;
    let lattice = state.lattice.as_ref().expect("layout stores a lattice");
    Ok(Json(lattice.document()).into_response())
}

async fn get_lattice(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let doc = read(&app, &id, |s| s.state.lattice.as_ref().map(|l| l.document())).await?;
    match doc {
        Some(d) => Ok(Json(d).into_response()),
        None => Err(ApiError::new(StatusCode::CONFLICT, "no-lattice", "run layout first")),
    }
}

async fn get_graph(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    read(&app, &id, |s| require_graph(&s.state).map(|g| graph_response(g, s.state.graph_version)))
        .await?
}

async fn put_graph(State(app): State<AppState>, Path(id): Path<String>, body: String) -> Result<Response, ApiError> {
    let graph: GraphState = parse(&body)?;
    let (state, _) = mutate(&app, &id, Operation::SetGraph { graph }).await?;
    Ok(graph_response(state.graph.as_ref().expect("just set"), state.graph_version))
}

async fn edit(State(app): State<AppState>, Path(id): Path<String>, body: String) -> Result<Response, ApiError> {
    let edit = parse(&body)?;
    let (state, _) = mutate(&app, &id, Operation::Edit { edit }).await?;
    Ok(graph_response(state.graph.as_ref().expect("edited"), state.graph_version))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureBody {
    vertex: VertexId,
    basis: MeasurementBasis,
    #[serde(default)]
    b0: Option<VertexId>,
}

async fn measure(State(app): State<AppState>, Path(id): Path<String>, body: String) -> Result<Response, ApiError> {
    let MeasureBody { vertex, basis, b0 } = parse(&body)?;
    let (state, _) = mutate(&app, &id, Operation::Measure { vertex, basis, b0 }).await?;
    Ok(graph_response(state.graph.as_ref().expect("measured"), state.graph_version))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexBody {
    vertex: VertexId,
}

async fn lc(State(app): State<AppState>, Path(id): Path<String>, body: String) -> Result<Response, ApiError> {
    let VertexBody { vertex } = parse(&body)?;
    let (state, _) = mutate(&app, &id, Operation::Lc { vertex }).await?;
    Ok(graph_response(state.graph.as_ref().expect("complemented"), state.graph_version))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MinimizeBody {
    budget: usize,
}

async fn minimize(State(app): State<AppState>, Path(id): Path<String>, body: String) -> Result<Response, ApiError> {
    let MinimizeBody { budget } = parse(&body)?;
    let n = read(&app, &id, |s| s.state.graph.as_ref().map_or(0, |g| g.vertex_count())).await?;
    let per_graph = n * n / 8 + 64;
    if budget.saturating_mul(per_graph) > ORBIT_MEMORY_CAP {
        return Err(ApiError::unprocessable(
            "budget",
            format!("budget {budget} is too large for a {n}-vertex graph"),
        ));
    }
    let (state, outcome) = mutate(&app, &id, Operation::MinimizeCz { budget, sequence: vec![] }).await?;
    let m = outcome.minimization.expect("fresh search");
    let g = state.graph.as_ref().expect("minimised");
    Ok(Json(json!({
        "graph": GraphDocument::from(g),
        "sequence": m.sequence,
        "cz_count": g.edge_count(),
        "exhaustive": m.exhaustive,
        "explored": m.explored,
        "graph_version": state.graph_version,
    }))
    .into_response())
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct CompileBody {
    #[serde(default)]
    bindings: Vec<ThetaBinding>,
}

async fn compile(State(app): State<AppState>, Path(id): Path<String>, body: String) -> Result<Response, ApiError> {
    let CompileBody { bindings } = parse(&body)?;
    let grid = read(&app, &id, |s| s.state.grid.clone()).await?;
    let p = emit(&grid, &bindings).map_err(qasm_error)?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], p.text).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubmitBody {
    #[serde(default)]
    bindings: Vec<ThetaBinding>,
    #[serde(default)]
    endpoint: Option<String>,
}

async fn submit_program(State(app): State<AppState>, Path(id): Path<String>, body: String) -> Result<Response, ApiError> {
    let SubmitBody { bindings, endpoint } = parse(&body)?;
    let grid = read(&app, &id, |s| s.state.grid.clone()).await?;
    let p = emit(&grid, &bindings).map_err(qasm_error)?;
    let flag = endpoint.or_else(|| app.config.endpoint.clone());
    let url = endpoint_from_env(flag.as_deref()).map_err(|e| ApiError::unprocessable("not-configured", e.to_string()))?;
    match submit(&p.text, &url, app.config.envelope).await {
        Ok(r) => Ok(Json(r).into_response()),
        Err(e) => Err(ApiError::new(StatusCode::BAD_GATEWAY, "transport", e.to_string())),
    }
}

async fn history(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let h = read(&app, &id, |s| s.history.clone()).await?;
    Ok(Json(h).into_response())
}

/// On-disk form of a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub id: String,
    pub grid: AlgorithmDocument,
    pub graph: Option<GraphState>,
    pub graph_version: u64,
    pub history: Vec<HistoryEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SaveBody {
    path: PathBuf,
}

async fn save(State(app): State<AppState>, Path(id): Path<String>, body: String) -> Result<Response, ApiError> {
    let SaveBody { path } = parse(&body)?;
    let snap = read(&app, &id, |s| Snapshot {
        id: id.clone(),
        grid: AlgorithmDocument::from(&s.state.grid),
        graph: s.state.graph.clone(),
        graph_version: s.state.graph_version,
        history: s.history.clone(),
    })
    .await?;
    let text = serde_json::to_string_pretty(&snap).expect("plain data serialises");
    let write = || -> std::io::Result<()> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        std::io::Write::write_all(&mut tmp, text.as_bytes())?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    };
    write().map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "io", format!("{}: {e}", path.display())))?;
    Ok(Json(json!({ "path": path })).into_response())
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/:id", get(summary))
        .route("/sessions/:id/grid", get(get_grid).put(put_grid))
        .route("/sessions/:id/metrics", get(metrics))
        .route("/sessions/:id/layout", post(layout))
        .route("/sessions/:id/lattice", get(get_lattice))
        .route("/sessions/:id/graph", get(get_graph).put(put_graph))
        .route("/sessions/:id/edit", post(edit))
        .route("/sessions/:id/measure", post(measure))
        .route("/sessions/:id/lc", post(lc))
        .route("/sessions/:id/minimize-cz", post(minimize))
        .route("/sessions/:id/compile", post(compile))
        .route("/sessions/:id/submit", post(submit_program))
        .route("/sessions/:id/save", post(save))
        .route("/sessions/:id/history", get(history))
        .with_state(app)
}

/// Serves until the listener fails.
pub async fn serve(listener: tokio::net::TcpListener, config: ServiceConfig) -> std::io::Result<()> {
    axum::serve(listener, router(AppState::new(config))).await
}
