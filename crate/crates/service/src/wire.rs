//! JSON message schemas of the event stream. One object per message, tagged by `type`.

use gazeswipe_core::interaction::{Gesture, Phase};
use gazeswipe_core::metrics::GroupSummary;
use gazeswipe_core::math::{Point2, Vec3};
use serde::{Deserialize, Serialize};

/// Messages a client may send. Unknown fields are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    /// In client-proxy mode `(x_cm, y_cm)` is where the user is actually looking, in
    /// screen centimetres; the service corrupts it into a raw camera-plane estimate.
    GazeFrame {
        t: f64,
        x_cm: f64,
        y_cm: f64,
        #[serde(default)]
        head_pose: Option<Vec3>,
    },
    TouchDown { t: f64, x_pt: f64, y_pt: f64 },
    TouchMove { t: f64, x_pt: f64, y_pt: f64 },
    TouchUp { t: f64, x_pt: f64, y_pt: f64 },
    DoubleTapEdge { t: f64 },
    /// Switches the calibration strategy and clears the calibration store.
    SetStrategy {
        strategy: String,
        #[serde(default)]
        t: Option<f64>,
    },
    MetricsSnapshot {
        #[serde(default)]
        t: Option<f64>,
    },
}

pub const CLIENT_TYPES: [&str; 7] =
    ["gaze_frame", "touch_down", "touch_move", "touch_up", "double_tap_edge", "set_strategy", "metrics_snapshot"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    CursorState {
        phase: Phase,
        snapped_id: Option<u32>,
        current_pt: Option<Point2>,
        calibrated_cm: Option<Point2>,
    },
    Selection {
        released_pt: Point2,
        hit_id: Option<u32>,
        target_id: Option<u32>,
        success: bool,
        thumb_distance_cm: f64,
        duration_s: f64,
        gesture: Gesture,
        /// The target presented for the next selection.
        next_target_id: Option<u32>,
    },
    SampleRecorded {
        g_est_cm: Point2,
        g_gt_cm: Point2,
        offset_cm: Point2,
        /// False when the active strategy does not learn from interactions.
        stored: bool,
    },
    MetricsSnapshot(MetricsSnapshot),
    Error { code: String, message: String },
}

impl ServerMessage {
    pub fn error(code: &str, message: impl Into<String>) -> Self {
        ServerMessage::Error { code: code.to_string(), message: message.into() }
    }
}

/// Per-session metrics: summaries per strategy and the sliding-window error series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSnapshot {
    pub selections: usize,
    pub groups: Vec<GroupSummary>,
    pub windows: Vec<WindowSeries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSeries {
    pub strategy: String,
    /// `(centre index, mean gaze error)` pairs; empty until a full window exists.
    pub points: Vec<(f64, f64)>,
}

/// A server message stamped with the sequence number of the client message that
/// produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub seq: u64,
    #[serde(flatten)]
    pub message: ServerMessage,
}

impl Envelope {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages always serialize")
    }
}

/// Parses one client message, telling apart unknown types from malformed payloads.
pub fn parse_client(text: &str) -> Result<ClientMessage, ServerMessage> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ServerMessage::error("malformed", e.to_string()))?;
    parse_client_value(value)
}

pub fn parse_client_value(value: serde_json::Value) -> Result<ClientMessage, ServerMessage> {
    match value.get("type").and_then(|t| t.as_str()) {
        Some(t) if CLIENT_TYPES.contains(&t) => {}
        Some(t) => return Err(ServerMessage::error("unknown_type", format!("unknown message type {t:?}"))),
        None => return Err(ServerMessage::error("malformed", "message has no string \"type\" field")),
    }
    serde_json::from_value(value).map_err(|e| ServerMessage::error("malformed", e.to_string()))
}
