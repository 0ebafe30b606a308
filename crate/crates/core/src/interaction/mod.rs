//! Target layouts, snapping, gesture classification and the two cursor techniques.

mod event;
mod gazeswipe;
mod gesture;
mod layout;
mod pure_cursor;
mod snap;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calibration::{CalibrationError, CalibrationSample};
use crate::gaze::PipelineError;
use crate::math::Point2;

pub use event::{read_event_log, write_event_log, EventKind, InteractionEvent};
pub use gazeswipe::{GazeSwipe, GazeSwipeConfig};
pub use gesture::{classify_gesture, path_length_cm, Gesture, GestureConfig, TapMemory, TouchPoint};
pub use layout::{
    cell_size_pt, generate_layout, Element, LayoutError, Rect, TargetLayout, ELEMENT_SIZES_PT, GRID_COLS, GRID_ROWS,
};
pub use pure_cursor::{PureCursor, PureCursorConfig};
pub use snap::snap_to_nearest;

#[derive(Debug, Error)]
pub enum InteractionError {
    #[error("{event:?} is not allowed in phase {phase:?}")]
    Protocol { phase: Phase, event: EventKind },
    #[error("event at t={t} arrived after t={prev}")]
    NonMonotone { t: f64, prev: f64 },
    #[error("event has non-finite coordinates or timestamp")]
    NonFinite,
    #[error("the cursor cannot lock before any gaze estimate has arrived")]
    NoGazeEstimate,
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl InteractionError {
    /// Short machine-readable category.
    pub fn code(&self) -> &'static str {
        match self {
            InteractionError::Protocol { .. } | InteractionError::NoGazeEstimate => "protocol",
            InteractionError::NonMonotone { .. } => "out_of_order",
            InteractionError::NonFinite | InteractionError::Parse { .. } => "invalid",
            InteractionError::Pipeline(PipelineError::Filter(crate::gaze::FilterError::NonMonotoneTimestamp {
                ..
            })) => "out_of_order",
            InteractionError::Pipeline(_) | InteractionError::Calibration(_) | InteractionError::Layout(_) => {
                "invalid"
            }
            InteractionError::Io(_) => "io",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Inactive,
    Hover,
    Locked,
    Dragging,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::Inactive, Phase::Hover, Phase::Locked, Phase::Dragging];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Technique {
    GazeSwipe,
    PureCursor,
}

impl Technique {
    pub fn as_str(self) -> &'static str {
        match self {
            Technique::GazeSwipe => "GazeSwipe",
            Technique::PureCursor => "PureCursor",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Technique {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gazeswipe" | "gs" => Ok(Technique::GazeSwipe),
            "purecursor" | "pc" => Ok(Technique::PureCursor),
            _ => Err(format!("unknown technique {s:?}")),
        }
    }
}

/// The live cursor of a technique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CursorState {
    pub phase: Phase,
    /// Latest uncalibrated estimate `G_E` (screen cm).
    pub raw_gaze_cm: Option<Point2>,
    /// Latest calibrated estimate `G_C` (screen cm).
    pub calibrated_cm: Option<Point2>,
    pub snapped_element: Option<u32>,
    pub locked_pos_pt: Option<Point2>,
    /// Where the cursor is drawn: the hover cursor in `Hover`, the dragged cursor
    /// while a touch is down.
    pub current_pos_pt: Option<Point2>,
    pub touch_origin_pt: Option<Point2>,
}

impl CursorState {
    pub fn new(phase: Phase) -> Self {
        Self {
            phase,
            raw_gaze_cm: None,
            calibrated_cm: None,
            snapped_element: None,
            locked_pos_pt: None,
            current_pos_pt: None,
            touch_origin_pt: None,
        }
    }
}

/// Result of a confirmed selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    pub released_pos_pt: Point2,
    pub released_pos_cm: Point2,
    pub hit_element: Option<u32>,
    pub target_id: Option<u32>,
    pub success: bool,
    pub thumb_distance_cm: f64,
    pub duration_s: f64,
    pub gesture: Gesture,
    /// Calibrated, pre-snap gaze estimate at the moment the cursor locked.
    pub gaze_at_lock_cm: Option<Point2>,
}

/// Everything one event produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Step {
    pub state_changed: bool,
    pub gesture: Option<Gesture>,
    pub outcome: Option<SelectionOutcome>,
    /// The calibration sample harvested from a selection.
    pub sample: Option<CalibrationSample>,
    /// Whether `sample` was stored (only strategies that learn from interactions).
    pub sample_recorded: bool,
}

/// Common driver interface of the two techniques.
pub trait InteractionEngine {
    fn handle(&mut self, ev: &InteractionEvent, layout: &TargetLayout) -> Result<Step, InteractionError>;
    fn state(&self) -> &CursorState;
}

/// Shared bookkeeping for one touch from down to up.
#[derive(Debug, Clone, PartialEq)]
struct TouchTrack {
    path: Vec<TouchPoint>,
}

impl TouchTrack {
    fn start(t: f64, pos_pt: Point2) -> Self {
        Self { path: vec![TouchPoint { t, pos_pt }] }
    }

    fn origin(&self) -> Point2 {
        self.path[0].pos_pt
    }

    fn push(&mut self, t: f64, pos_pt: Point2) {
        self.path.push(TouchPoint { t, pos_pt });
    }

    fn duration(&self) -> f64 {
        self.path.last().map_or(0.0, |p| p.t) - self.path[0].t
    }
}

/// Timestamp bookkeeping shared by both techniques: finite, non-decreasing.
fn check_event(ev: &InteractionEvent, last_t: Option<f64>) -> Result<(), InteractionError> {
    let t = ev.timestamp();
    let finite = t.is_finite()
        && match ev {
            InteractionEvent::TouchDown { pos_pt, .. }
            | InteractionEvent::TouchMove { pos_pt, .. }
            | InteractionEvent::TouchUp { pos_pt, .. } => pos_pt.is_finite(),
            _ => true,
        };
    if !finite {
        return Err(InteractionError::NonFinite);
    }
    match last_t {
        Some(prev) if t < prev => Err(InteractionError::NonMonotone { t, prev }),
        _ => Ok(()),
    }
}

fn protocol(phase: Phase, ev: &InteractionEvent) -> InteractionError {
    InteractionError::Protocol { phase, event: ev.kind() }
}

fn outcome_at(
    released_pt: Point2,
    track: &TouchTrack,
    gesture: Gesture,
    gaze_at_lock_cm: Option<Point2>,
    layout: &TargetLayout,
    profile: &crate::geometry::DeviceProfile,
) -> SelectionOutcome {
    let target = layout.target();
    let released_cm = crate::geometry::screen_pt_to_cm(released_pt, profile).unwrap_or(Point2::ZERO);
    SelectionOutcome {
        released_pos_pt: released_pt,
        released_pos_cm: released_cm,
        hit_element: layout.element_at(released_pt),
        target_id: target.map(|e| e.id),
        success: target.is_some_and(|e| e.rect_pt.contains(released_pt)),
        thumb_distance_cm: path_length_cm(&track.path, profile),
        duration_s: track.duration(),
        gesture,
        gaze_at_lock_cm,
    }
}

/// Either technique behind one type, for drivers that pick at runtime.
#[derive(Debug, Clone)]
pub enum Engine {
    GazeSwipe(Box<GazeSwipe>),
    PureCursor(PureCursor),
}

impl Engine {
    pub fn technique(&self) -> Technique {
        match self {
            Engine::GazeSwipe(_) => Technique::GazeSwipe,
            Engine::PureCursor(_) => Technique::PureCursor,
        }
    }

    pub fn as_gaze_swipe(&self) -> Option<&GazeSwipe> {
        match self {
            Engine::GazeSwipe(e) => Some(e),
            Engine::PureCursor(_) => None,
        }
    }

    pub fn as_gaze_swipe_mut(&mut self) -> Option<&mut GazeSwipe> {
        match self {
            Engine::GazeSwipe(e) => Some(e),
            Engine::PureCursor(_) => None,
        }
    }
}

impl InteractionEngine for Engine {
    fn handle(&mut self, ev: &InteractionEvent, layout: &TargetLayout) -> Result<Step, InteractionError> {
        match self {
            Engine::GazeSwipe(e) => e.handle(ev, layout),
            Engine::PureCursor(e) => e.handle(ev, layout),
        }
    }

    fn state(&self) -> &CursorState {
        match self {
            Engine::GazeSwipe(e) => e.state(),
            Engine::PureCursor(e) => e.state(),
        }
    }
}
