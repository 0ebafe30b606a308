//! HTTP control routes and the per-session WebSocket event stream.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;

use crate::session::{CreateSessionRequest, Session, SessionDescriptor, SessionError};
use crate::wire::{Envelope, MetricsSnapshot};

type Shared = Arc<Mutex<Session>>;

/// All live sessions. Each session sits behind its own lock, so events of one session
/// are serialized while different sessions proceed independently.
#[derive(Debug, Clone, Default)]
pub struct AppState {
    sessions: Arc<Mutex<BTreeMap<String, Shared>>>,
    next_id: Arc<AtomicU64>,
}

fn lock<T>(m: &Mutex<T>) -> std::sync::MutexGuard<'_, T> {
    // a panic inside a handler must not take the whole service down
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(&self, req: &CreateSessionRequest) -> Result<SessionDescriptor, SessionError> {
        let id = format!("s{}", self.next_id.fetch_add(1, Ordering::Relaxed) + 1);
        let session = Session::new(id.clone(), req)?;
        let descriptor = session.descriptor();
        lock(&self.sessions).insert(id, Arc::new(Mutex::new(session)));
        Ok(descriptor)
    }

    pub fn get(&self, id: &str) -> Result<Shared, SessionError> {
        lock(&self.sessions).get(id).cloned().ok_or_else(|| SessionError::NotFound(id.to_string()))
    }

    pub fn remove(&self, id: &str) -> Result<(), SessionError> {
        lock(&self.sessions).remove(id).map(|_| ()).ok_or_else(|| SessionError::NotFound(id.to_string()))
    }

    pub fn list(&self) -> Vec<SessionDescriptor> {
        let sessions: Vec<Shared> = lock(&self.sessions).values().cloned().collect();
        sessions.iter().map(|s| lock(s).descriptor()).collect()
    }

    pub fn metrics(&self, id: &str) -> Result<MetricsSnapshot, SessionError> {
        let session = self.get(id)?;
        let snapshot = lock(&session).metrics();
        Ok(snapshot)
    }

    /// Feeds one message, or a JSON array of messages, to a session.
    pub fn handle_text(&self, id: &str, text: &str) -> Result<Vec<Envelope>, SessionError> {
        let session = self.get(id)?;
        let mut session = lock(&session);
        Ok(match serde_json::from_str::<serde_json::Value>(text) {
            Ok(serde_json::Value::Array(items)) => items.into_iter().flat_map(|v| session.handle_value(v)).collect(),
            _ => session.handle_text(text),
        })
    }
}

impl IntoResponse for SessionError {
    fn into_response(self) -> Response {
        let status = match self {
            SessionError::NotFound(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::BAD_REQUEST,
        };
        (status, Json(json!({ "error": self.to_string() }))).into_response()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", axum::routing::delete(delete_session))
        .route("/sessions/{id}/metrics", get(session_metrics))
        .route("/sessions/{id}/messages", post(post_messages))
        .route("/sessions/{id}/ws", get(session_ws))
        .with_state(state)
}

async fn create_session(State(state): State<AppState>, body: String) -> Response {
    let req: CreateSessionRequest = match serde_json::from_str(&body) {
        Ok(r) => r,
        Err(e) => return SessionError::Invalid(e.to_string()).into_response(),
    };
    match state.create(&req) {
        Ok(d) => (StatusCode::CREATED, Json(d)).into_response(),
        Err(e) => e.into_response(),
    }
}

async fn list_sessions(State(state): State<AppState>) -> Json<Vec<SessionDescriptor>> {
    Json(state.list())
}

async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.remove(&id) {
        Ok(()) => StatusCode::NO_CONTENT.into_response(),
        Err(e) => e.into_response(),
    }
}

async fn session_metrics(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.metrics(&id) {
        Ok(m) => Json(m).into_response(),
        Err(e) => e.into_response(),
    }
}

async fn post_messages(State(state): State<AppState>, Path(id): Path<String>, body: String) -> Response {
    match state.handle_text(&id, &body) {
        Ok(out) => Json(out).into_response(),
        Err(e) => e.into_response(),
    }
}

async fn session_ws(State(state): State<AppState>, Path(id): Path<String>, ws: WebSocketUpgrade) -> Response {
    if let Err(e) = state.get(&id) {
        return e.into_response();
    }
    ws.on_upgrade(move |socket| stream_session(socket, state, id))
}

async fn stream_session(mut socket: WebSocket, state: AppState, id: String) {
    while let Some(Ok(msg)) = socket.recv().await {
        let text = match msg {
            Message::Text(t) => t.to_string(),
            Message::Close(_) => break,
            _ => continue,
        };
        let replies = match state.get(&id) {
            Ok(session) => lock(&session).handle_text(&text),
            Err(e) => {
                let _ = socket.send(Message::Text(json!({ "error": e.to_string() }).to_string().into())).await;
                break;
            }
        };
        for r in replies {
            if socket.send(Message::Text(r.to_json().into())).await.is_err() {
                return;
            }
        }
    }
}

/// Serves the API on an already bound listener until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: AppState,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    if let Ok(addr) = listener.local_addr() {
        tracing::info!(%addr, "session service listening");
    }
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await
}
