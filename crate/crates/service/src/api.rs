//! REST routes.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dlproof_core::elh::atomic_cis_of;
use dlproof_core::proof::{Measure, ProofDocument};
use dlproof_core::render::{functional, pretty};
use dlproof_core::{parse_axiom, Fragment, InferenceRule, ParseError};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::engine::{self, EngineError, Method, ProofRequest};
use crate::store::{ProofRecord, Store};

pub struct AppState {
    pub store: Store,
    /// Budget for one forgetting-based proof request.
    pub budget: Duration,
}

impl AppState {
    pub fn new(store: Store) -> Self {
        AppState { store, budget: dlproof_core::fbp::DEFAULT_BUDGET }
    }
}

pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/projects", post(create_project))
        .route("/api/projects/{id}/entailments", get(entailments))
        .route("/api/projects/{id}/proofs", post(create_proof))
        .route("/api/projects/{id}/proofs/{pid}", get(get_proof))
        .route("/api/rules/{rule_id}", get(rule))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
    detail: Option<Value>,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, kind, message: message.into(), detail: None }
    }

    fn not_found(what: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "NotFound", format!("unknown {what}"))
    }

    fn parse(e: ParseError) -> Self {
        let detail = match &e {
            ParseError::Syntax { line, col, .. } => json!({ "line": line, "col": col }),
            ParseError::DuplicateAxiom { line, .. } => json!({ "line": line }),
        };
        ApiError { detail: Some(detail), ..ApiError::new(StatusCode::BAD_REQUEST, "SyntaxError", e.to_string()) }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let (status, kind) = match &e {
            EngineError::NotEntailed(_) => (StatusCode::CONFLICT, "NotEntailed"),
            EngineError::Unsupported(_) => (StatusCode::UNPROCESSABLE_ENTITY, "Unsupported"),
            EngineError::BudgetExceeded => (StatusCode::GATEWAY_TIMEOUT, "BudgetExceeded"),
            EngineError::Internal(_) => (StatusCode::INTERNAL_SERVER_ERROR, "Internal"),
        };
        ApiError::new(status, kind, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.kind, "message": self.message });
        if let Some(d) = self.detail {
            body["detail"] = d;
        }
        (self.status, Json(body)).into_response()
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct NewProject {
    name: String,
    ontology_text: String,
}

async fn create_project(State(st): State<Arc<AppState>>, Json(req): Json<NewProject>) -> Result<Response, ApiError> {
    let p = st.store.create(&req.name, &req.ontology_text).map_err(ApiError::parse)?;
    log::info!("created project {} ({} axioms)", p.id, p.ontology.len());
    let body = json!({ "id": p.id, "fragment": p.fragment.as_str(), "axiomCount": p.ontology.len() });
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn entailments(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let p = st.store.get(&id).ok_or_else(|| ApiError::not_found("project"))?;
    if p.fragment != Fragment::Elh {
        return Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "Unsupported",
            "entailment listing needs an ELH ontology; request a forgetting-based proof with an explicit goal",
        ));
    }
    let project = p.clone();
    let d = tokio::task::spawn_blocking(move || project.saturation())
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))?
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "Unsupported", e.to_string()))?;
    let list: Vec<Value> = atomic_cis_of(&d, &p.ontology, false)
        .iter()
        .map(|a| json!({ "functional": functional(a), "pretty": pretty(a) }))
        .collect();
    Ok(Json(Value::Array(list)))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct NewProof {
    goal: String,
    method: String,
    #[serde(default)]
    measure: Option<String>,
    #[serde(default)]
    known_signature: Vec<String>,
}

fn json_body(status: StatusCode, body: &str) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body.to_string()).into_response()
}

async fn create_proof(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<NewProof>,
) -> Result<Response, ApiError> {
    let p = st.store.get(&id).ok_or_else(|| ApiError::not_found("project"))?;
    let goal = parse_axiom(&req.goal).map_err(ApiError::parse)?;
    let method: Method =
        req.method.parse().map_err(|e: String| ApiError::new(StatusCode::BAD_REQUEST, "BadRequest", e))?;
    let measure: Measure = match &req.measure {
        Some(m) => m.parse().map_err(|e: dlproof_core::proof::UnknownMeasure| {
            ApiError::new(StatusCode::BAD_REQUEST, "BadRequest", e.to_string())
        })?,
        None => Measure::TreeSize,
    };
    let known = engine::known_signature(&p.ontology, &req.known_signature);
    let request = ProofRequest { goal, method, measure, known: known.clone() };
    let budget = st.budget;
    let project = p.clone();
    let proof = tokio::task::spawn_blocking(move || {
        let saturation = match request.method {
            Method::ElkMinimal if project.fragment == Fragment::Elh => project.saturation().ok(),
            _ => None,
        };
        engine::prove(&project.ontology, saturation.as_deref(), &request, budget)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))??;

    let pid = p.next_proof_id();
    let doc = ProofDocument::new(pid.clone(), method.as_str(), &proof, &known);
    let json: Arc<str> = serde_json::to_string(&doc).expect("proof documents serialize").into();
    st.store.add_proof(&p, ProofRecord { id: pid.clone(), json: json.clone(), known_signature: req.known_signature });
    log::info!("project {}: proof {pid} by {method}, {} vertices", p.id, proof.len());
    Ok(json_body(StatusCode::CREATED, &json))
}

async fn get_proof(State(st): State<Arc<AppState>>, Path((id, pid)): Path<(String, String)>) -> Result<Response, ApiError> {
    let p = st.store.get(&id).ok_or_else(|| ApiError::not_found("project"))?;
    let rec = p.proof(&pid).ok_or_else(|| ApiError::not_found("proof"))?;
    Ok(json_body(StatusCode::OK, &rec.json))
}

async fn rule(Path(rule_id): Path<String>) -> Result<Json<Value>, ApiError> {
    let r = InferenceRule::from_id(&rule_id).ok_or_else(|| ApiError::not_found("rule"))?;
    Ok(Json(serde_json::to_value(r.card()).expect("rule cards serialize")))
}
