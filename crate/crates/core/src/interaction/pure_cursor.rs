//! Touch-only baseline: the cursor starts under the thumb and extends along the swipe
//! by a fixed gain. Gaze is ignored.

use serde::{Deserialize, Serialize};

use crate::geometry::DeviceProfile;
use crate::math::Point2;

use super::{
    check_event, classify_gesture, outcome_at, protocol, CursorState, Gesture, GestureConfig, InteractionEngine,
    InteractionError, InteractionEvent, Phase, Step, TapMemory, TargetLayout, TouchTrack,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PureCursorConfig {
    pub gain: f64,
    pub gesture: GestureConfig,
}

impl Default for PureCursorConfig {
    fn default() -> Self {
        Self { gain: 3.0, gesture: GestureConfig::default() }
    }
}

#[derive(Debug, Clone)]
pub struct PureCursor {
    cfg: PureCursorConfig,
    profile: DeviceProfile,
    state: CursorState,
    touch: Option<TouchTrack>,
    last_tap: Option<TapMemory>,
    last_t: Option<f64>,
}

impl PureCursor {
    pub fn new(cfg: PureCursorConfig, profile: DeviceProfile) -> Self {
        Self { cfg, profile, state: CursorState::new(Phase::Hover), touch: None, last_tap: None, last_t: None }
    }

    pub fn profile(&self) -> &DeviceProfile {
        &self.profile
    }

    pub fn config(&self) -> &PureCursorConfig {
        &self.cfg
    }

    fn cursor_for(&self, pos: Point2) -> Point2 {
        let origin = self.state.touch_origin_pt.unwrap_or(pos);
        origin + (pos - origin) * self.cfg.gain
    }

    fn on_touch_up(&mut self, t: f64, pos: Point2, layout: &TargetLayout) -> Step {
        let mut track = self.touch.take().unwrap_or_else(|| TouchTrack::start(t, pos));
        track.push(t, pos);
        let gesture = classify_gesture(&track.path, &self.profile, &self.cfg.gesture, self.last_tap);
        let released = match gesture {
            Gesture::TapOnly => track.origin(),
            _ => self.cursor_for(pos),
        };
        let outcome = gesture.selects().then(|| outcome_at(released, &track, gesture, None, layout, &self.profile));
        self.last_tap = (gesture == Gesture::TapOnly).then_some(TapMemory { released_t: t, pos_pt: pos });
        self.state = CursorState::new(Phase::Hover);
        Step { state_changed: true, gesture: Some(gesture), outcome, ..Step::default() }
    }
}

impl InteractionEngine for PureCursor {
    fn handle(&mut self, ev: &InteractionEvent, layout: &TargetLayout) -> Result<Step, InteractionError> {
        check_event(ev, self.last_t)?;
        let phase = self.state.phase;
        let step = match (phase, *ev) {
            (_, InteractionEvent::GazeFrameArrived(frame)) => {
                frame.validate().map_err(crate::gaze::PipelineError::from)?;
                Step::default()
            }
            (Phase::Hover, InteractionEvent::TouchDown { t, pos_pt }) => {
                self.touch = Some(TouchTrack::start(t, pos_pt));
                self.state.phase = Phase::Locked;
                self.state.locked_pos_pt = Some(pos_pt);
                self.state.current_pos_pt = Some(pos_pt);
                self.state.touch_origin_pt = Some(pos_pt);
                Step { state_changed: true, ..Step::default() }
            }
            (Phase::Locked | Phase::Dragging, InteractionEvent::TouchMove { t, pos_pt }) => {
                if let Some(track) = &mut self.touch {
                    track.push(t, pos_pt);
                }
                self.state.phase = Phase::Dragging;
                self.state.current_pos_pt = Some(self.cursor_for(pos_pt));
                Step { state_changed: true, ..Step::default() }
            }
            (Phase::Locked | Phase::Dragging, InteractionEvent::TouchUp { t, pos_pt }) => {
                self.on_touch_up(t, pos_pt, layout)
            }
            (Phase::Inactive, InteractionEvent::DoubleTapEdge { .. }) => {
                self.state = CursorState::new(Phase::Hover);
                self.last_tap = None;
                Step { state_changed: true, ..Step::default() }
            }
            (Phase::Hover, InteractionEvent::DoubleTapEdge { .. }) => {
                self.state = CursorState::new(Phase::Inactive);
                self.last_tap = None;
                Step { state_changed: true, ..Step::default() }
            }
            (Phase::Inactive, InteractionEvent::TouchDown { .. } | InteractionEvent::TouchMove { .. } | InteractionEvent::TouchUp { .. })
            | (Phase::Hover, InteractionEvent::TouchMove { .. } | InteractionEvent::TouchUp { .. })
            | (Phase::Locked | Phase::Dragging, InteractionEvent::TouchDown { .. } | InteractionEvent::DoubleTapEdge { .. }) => {
                return Err(protocol(phase, ev))
            }
        };
        self.last_t = Some(ev.timestamp());
        Ok(step)
    }

    fn state(&self) -> &CursorState {
        &self.state
    }
}
