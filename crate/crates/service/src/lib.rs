//! HTTP/JSON service over `lpattack-core`.
//!
//! The corpus directory holds `debates.json` and an `annotations/` directory
//! with one annotations file per annotator. Compute endpoints depend only on
//! the request body and the stored corpus. Validation findings are returned
//! as a 200 report; malformed requests get a 400 and domain refusals a 422,
//! both with a `{code, message, pointer}` body.

pub mod error;
pub mod store;

use std::collections::{BTreeSet, HashMap};
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::routing::{get, post};
use axum::{Json, Router};
use lpattack_core::agreement::{agreement_report, AgreementConfig, Mode};
use lpattack_core::canon::{canonicalize, CanonError};
use lpattack_core::io::{annotation_from_value, annotation_to_value, load_debates, IoError};
use lpattack_core::model::{Annotation, Debate};
use lpattack_core::render::{render_text_form, RenderError};
use lpattack_core::stats::{stats_report, StatsReport};
use lpattack_core::validate::{validate, ValidationReport};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub use error::{ApiError, ErrorBody};
use store::{valid_annotator_id, AnnotationStore};

pub const DEBATES_FILE: &str = "debates.json";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub host: IpAddr,
    pub port: u16,
    pub corpus_dir: PathBuf,
}

impl ServiceConfig {
    pub fn new(port: u16, corpus_dir: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            host: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port,
            corpus_dir: corpus_dir.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("corpus directory {0} is unreadable: {1}")]
    Corpus(PathBuf, String),
    #[error("cannot listen on {0}: {1}")]
    Bind(SocketAddr, std::io::Error),
    #[error("server stopped: {0}")]
    Server(std::io::Error),
}

pub struct AppState {
    debates: Vec<Debate>,
    by_id: HashMap<String, usize>,
    store: AnnotationStore,
}

impl AppState {
    pub fn load(corpus_dir: &Path) -> Result<Self, ServiceError> {
        let corpus_err = |msg: String| ServiceError::Corpus(corpus_dir.to_path_buf(), msg);
        let debates = load_debates(corpus_dir.join(DEBATES_FILE)).map_err(|e| corpus_err(e.to_string()))?;
        let store = AnnotationStore::open(corpus_dir).map_err(|e| corpus_err(e.to_string()))?;
        let by_id = debates.iter().enumerate().map(|(i, d)| (d.id.clone(), i)).collect();
        Ok(AppState { debates, by_id, store })
    }

    pub fn debate(&self, id: &str) -> Option<&Debate> {
        self.by_id.get(id).map(|&i| &self.debates[i])
    }
}

type Shared = State<Arc<AppState>>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/debates", get(list_debates))
        .route("/debates/{id}", get(get_debate))
        .route("/validate", post(validate_annotation))
        .route("/canonicalize", post(canonicalize_annotation))
        .route("/render", post(render_annotation))
        .route("/annotations", post(store_annotation).get(query_annotations))
        .route("/agreement", post(agreement))
        .route("/stats", get(stats))
        .with_state(state)
}

/// Loads the corpus, binds and serves until the process is stopped.
pub async fn serve(config: ServiceConfig) -> Result<(), ServiceError> {
    let state = Arc::new(AppState::load(&config.corpus_dir)?);
    let addr = SocketAddr::new(config.host, config.port);
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| ServiceError::Bind(addr, e))?;
    tracing::info!(%addr, debates = state.debates.len(), "listening");
    axum::serve(listener, router(state)).await.map_err(ServiceError::Server)
}

fn parse_body(body: &Bytes) -> Result<Value, ApiError> {
    let text = std::str::from_utf8(body).map_err(|e| ApiError::bad_request("E_MALFORMED_JSON", e.to_string()))?;
    serde_json::from_str(&lpattack_core::io::normalize_input(text)).map_err(|e| {
        ApiError::from(IoError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    })
}

fn annotation_field(body: &Value) -> Result<Annotation, ApiError> {
    let raw = body
        .get("annotation")
        .ok_or_else(|| ApiError::bad_request("E_SCHEMA", "missing field `annotation`").at("/annotation"))?;
    Ok(annotation_from_value(raw, "/annotation")?)
}

fn bool_field(body: &Value, key: &str) -> Result<bool, ApiError> {
    match body.get(key) {
        None | Some(Value::Null) => Ok(false),
        Some(Value::Bool(b)) => Ok(*b),
        Some(_) => Err(ApiError::bad_request("E_SCHEMA", format!("`{key}` must be a boolean")).at(format!("/{key}"))),
    }
}

fn unknown_debate(ann: &Annotation) -> ApiError {
    ApiError::unprocessable("E_UNKNOWN_DEBATE", format!("debate {:?} is not in the corpus", ann.debate_id))
        .at("/annotation/debate_id")
}

fn invalid(report: &ValidationReport) -> ApiError {
    let codes: Vec<&str> = report.errors.iter().map(|d| d.code.as_str()).collect();
    ApiError::unprocessable("E_INVALID_ANNOTATION", format!("annotation fails validation: {}", codes.join(", ")))
        .at("/annotation")
}

#[derive(Serialize)]
struct DebateSummary<'a> {
    id: &'a str,
    topic: &'a str,
}

async fn list_debates(State(state): Shared) -> Json<Value> {
    let items: Vec<DebateSummary> = state
        .debates
        .iter()
        .map(|d| DebateSummary { id: &d.id, topic: &d.topic })
        .collect();
    Json(json!({ "debates": items }))
}

async fn get_debate(State(state): Shared, UrlPath(id): UrlPath<String>) -> Result<Json<Debate>, ApiError> {
    state
        .debate(&id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError::not_found(format!("no debate with id {id:?}")))
}

async fn validate_annotation(State(state): Shared, body: Bytes) -> Result<Json<ValidationReport>, ApiError> {
    let ann = annotation_field(&parse_body(&body)?)?;
    let report = match state.debate(&ann.debate_id) {
        Some(d) => validate(&ann, d),
        None => ValidationReport::missing_debate(&ann),
    };
    Ok(Json(report))
}

async fn canonicalize_annotation(State(_state): Shared, body: Bytes) -> Result<Json<Value>, ApiError> {
    let body = parse_body(&body)?;
    let ann = annotation_field(&body)?;
    let drop_aux = bool_field(&body, "drop_aux_rationale")?;
    match canonicalize(&ann, drop_aux) {
        Ok(canon) => Ok(Json(annotation_to_value(&canon))),
        Err(CanonError::Invalid(report)) => Err(invalid(&report)),
    }
}

async fn render_annotation(State(state): Shared, body: Bytes) -> Result<Json<Value>, ApiError> {
    let ann = annotation_field(&parse_body(&body)?)?;
    let debate = state.debate(&ann.debate_id).ok_or_else(|| unknown_debate(&ann))?;
    match render_text_form(&ann, debate) {
        Ok(text_form) => Ok(Json(json!({ "text_form": text_form }))),
        Err(RenderError::NotApplicable) => Err(ApiError::unprocessable(
            "E_NOT_APPLICABLE",
            "a Not-Applicable annotation has no text form",
        )
        .at("/annotation/status")),
        Err(RenderError::Invalid(report)) => Err(invalid(&report)),
    }
}

async fn store_annotation(State(state): Shared, body: Bytes) -> Result<Json<Value>, ApiError> {
    let ann = annotation_field(&parse_body(&body)?)?;
    if !valid_annotator_id(&ann.annotator_id) {
        return Err(ApiError::bad_request(
            "E_SCHEMA",
            "annotator_id must be non-empty ASCII letters, digits, '-', '_' or '.'",
        )
        .at("/annotation/annotator_id"));
    }
    if state.debate(&ann.debate_id).is_none() {
        return Err(unknown_debate(&ann));
    }
    let stored_id = state.store.put(ann).await?;
    tracing::debug!(%stored_id, "stored annotation");
    Ok(Json(json!({ "stored_id": stored_id })))
}

#[derive(Deserialize)]
struct AnnotationQuery {
    debate_id: Option<String>,
    annotator_id: Option<String>,
}

async fn query_annotations(State(state): Shared, Query(q): Query<AnnotationQuery>) -> Result<Json<Value>, ApiError> {
    let pool = match &q.annotator_id {
        Some(a) => state.store.of(a).await?.unwrap_or_default(),
        None => state.store.all().await?,
    };
    let items: Vec<Value> = pool
        .iter()
        .filter(|a| q.debate_id.as_ref().is_none_or(|d| &a.debate_id == d))
        .map(annotation_to_value)
        .collect();
    Ok(Json(json!({ "annotations": items })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AgreementRequest {
    annotator_a: String,
    annotator_b: String,
    #[serde(default)]
    mode: Mode,
    #[serde(default)]
    config: AgreementOptions,
}

#[derive(Deserialize, Default)]
struct AgreementOptions {
    #[serde(default)]
    drop_aux_rationale: bool,
    lenient_threshold: Option<f64>,
}

/// Agreement over the debates both annotators have annotated.
async fn agreement(State(state): Shared, body: Bytes) -> Result<Json<Value>, ApiError> {
    let body = parse_body(&body)?;
    let req: AgreementRequest = serde_json::from_value(body)
        .map_err(|e| ApiError::bad_request("E_SCHEMA", e.to_string()))?;
    let mut cfg = AgreementConfig {
        mode: req.mode,
        drop_aux_rationale: req.config.drop_aux_rationale,
        ..AgreementConfig::default()
    };
    if let Some(t) = req.config.lenient_threshold {
        if !(0.0..=1.0).contains(&t) {
            return Err(ApiError::bad_request("E_SCHEMA", "lenient_threshold must lie in [0, 1]")
                .at("/config/lenient_threshold"));
        }
        cfg.lenient_threshold = t;
    }
    let load = |who: &'static str, id: String| {
        let state = Arc::clone(&state);
        async move {
            state
                .store
                .of(&id)
                .await?
                .ok_or_else(|| ApiError::not_found(format!("annotator {id:?} has no annotations")).at(format!("/{who}")))
        }
    };
    let a = load("annotator_a", req.annotator_a).await?;
    let b = load("annotator_b", req.annotator_b).await?;
    let shared: BTreeSet<&str> = a
        .iter()
        .map(|x| x.debate_id.as_str())
        .filter(|id| b.iter().any(|y| y.debate_id == *id))
        .collect();
    let keep = |corpus: &[Annotation]| -> Vec<Annotation> {
        corpus.iter().filter(|x| shared.contains(x.debate_id.as_str())).cloned().collect()
    };
    let report = agreement_report(&keep(&a), &keep(&b), &cfg)
        .map_err(|e| ApiError::unprocessable("E_AGREEMENT", e.to_string()))?;
    Ok(Json(serde_json::to_value(report).map_err(|e| ApiError::internal(e.to_string()))?))
}

async fn stats(State(state): Shared) -> Result<Json<StatsReport>, ApiError> {
    let corpus = state.store.all().await?;
    Ok(Json(stats_report(&corpus)))
}
