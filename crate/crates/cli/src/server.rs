//! HTTP+JSON game service.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chromatope::hex::{GameSpec, MoveRequest, SessionStore};
use chromatope::HexError;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

pub type AppState = Arc<SessionStore>;

pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn bad_request(message: String) -> Self {
        Self { status: StatusCode::BAD_REQUEST, kind: "malformed_request", message }
    }
}

impl From<HexError> for ApiError {
    fn from(e: HexError) -> Self {
        let status = match &e {
            HexError::UnknownSession(_) => StatusCode::NOT_FOUND,
            HexError::VersionConflict { .. } | HexError::NoFreeSeat => StatusCode::CONFLICT,
            HexError::Polytope(_) | HexError::InvalidBoard(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        Self { status, kind: e.reason(), message: e.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "kind": self.kind, "message": self.message } });
        (self.status, Json(body)).into_response()
    }
}

/// Parses a body so malformed JSON gets the same error envelope.
fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    let text = if body.is_empty() { b"{}".as_slice() } else { body.as_ref() };
    serde_json::from_slice(text).map_err(|e| ApiError::bad_request(e.to_string()))
}

#[derive(Deserialize, Default)]
struct JoinRequest {
    #[serde(default)]
    player: Option<usize>,
}

async fn create(State(store): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let spec: GameSpec = parse(&body)?;
    let id = tokio::task::spawn_blocking(move || store.create(&spec)).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        kind: "internal",
        message: e.to_string(),
    })??;
    Ok((StatusCode::CREATED, Json(json!({ "game_id": id }))).into_response())
}

async fn state(State(store): State<AppState>, Path(id): Path<u64>) -> Result<Response, ApiError> {
    Ok(Json(store.snapshot(id)?).into_response())
}

async fn join(State(store): State<AppState>, Path(id): Path<u64>, body: Bytes) -> Result<Response, ApiError> {
    let req: JoinRequest = parse(&body)?;
    Ok(Json(store.join(id, req.player)?).into_response())
}

async fn play(State(store): State<AppState>, Path(id): Path<u64>, body: Bytes) -> Result<Response, ApiError> {
    let req: MoveRequest = parse(&body)?;
    let snap = tokio::task::spawn_blocking(move || store.play(id, &req)).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        kind: "internal",
        message: e.to_string(),
    })??;
    Ok(Json(snap).into_response())
}

async fn winner(State(store): State<AppState>, Path(id): Path<u64>) -> Result<Response, ApiError> {
    Ok(Json(json!({ "winner": store.winner(id)? })).into_response())
}

pub fn router(store: AppState) -> Router {
    Router::new()
        .route("/games", post(create))
        .route("/games/{id}", get(state))
        .route("/games/{id}/join", post(join))
        .route("/games/{id}/moves", post(play))
        .route("/games/{id}/winner", get(winner))
        .with_state(store)
}

pub async fn serve(host: &str, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(SessionStore::new()))).await
}
