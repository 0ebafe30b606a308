use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::gaze::GazeFrame;
use crate::math::Point2;

use super::InteractionError;

/// Input to the interaction state machines. Serialized with a `kind` tag, one event
/// per line in event logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum InteractionEvent {
    GazeFrameArrived(GazeFrame),
    TouchDown { t: f64, pos_pt: Point2 },
    TouchMove { t: f64, pos_pt: Point2 },
    TouchUp { t: f64, pos_pt: Point2 },
    DoubleTapEdge { t: f64 },
}

/// Event kinds without payload, for enumeration and error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    GazeFrameArrived,
    TouchDown,
    TouchMove,
    TouchUp,
    DoubleTapEdge,
}

impl EventKind {
    pub const ALL: [EventKind; 5] = [
        EventKind::GazeFrameArrived,
        EventKind::TouchDown,
        EventKind::TouchMove,
        EventKind::TouchUp,
        EventKind::DoubleTapEdge,
    ];
}

impl InteractionEvent {
    pub fn timestamp(&self) -> f64 {
        match *self {
            InteractionEvent::GazeFrameArrived(f) => f.timestamp_s,
            InteractionEvent::TouchDown { t, .. }
            | InteractionEvent::TouchMove { t, .. }
            | InteractionEvent::TouchUp { t, .. }
            | InteractionEvent::DoubleTapEdge { t } => t,
        }
    }

    pub fn kind(&self) -> EventKind {
        match self {
            InteractionEvent::GazeFrameArrived(_) => EventKind::GazeFrameArrived,
            InteractionEvent::TouchDown { .. } => EventKind::TouchDown,
            InteractionEvent::TouchMove { .. } => EventKind::TouchMove,
            InteractionEvent::TouchUp { .. } => EventKind::TouchUp,
            InteractionEvent::DoubleTapEdge { .. } => EventKind::DoubleTapEdge,
        }
    }
}

pub fn write_event_log<W: Write>(mut w: W, events: &[InteractionEvent]) -> Result<(), InteractionError> {
    for e in events {
        serde_json::to_writer(&mut w, e).map_err(|e| InteractionError::Io(e.into()))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Parses a JSON-lines event log. Ordering is checked by the state machine, not here.
pub fn read_event_log<R: BufRead>(r: R) -> Result<Vec<InteractionEvent>, InteractionError> {
    let mut events = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let ev = serde_json::from_str(&line).map_err(|source| InteractionError::Parse { line: i + 1, source })?;
        events.push(ev);
    }
    Ok(events)
}
