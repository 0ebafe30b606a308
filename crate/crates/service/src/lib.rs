//! Live sessions over the interaction engine.
//!
//! Control requests go over HTTP (create, list, close, metrics); events go over a
//! WebSocket per session, one JSON object per message. `POST /sessions/{id}/messages`
//! accepts the same messages for scripted clients.

mod http;
mod session;
pub mod wire;

pub use http::{router, serve, AppState};
pub use session::{CreateSessionRequest, GazeMode, Session, SessionDescriptor, SessionError, WINDOW, WINDOW_STEP};
pub use wire::{ClientMessage, Envelope, MetricsSnapshot, ServerMessage};
