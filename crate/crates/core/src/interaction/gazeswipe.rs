//! Gaze-driven cursor with touch lock, relative drag and release.
//!
//! Gaze moves a snapping hover cursor. A touch anywhere locks it; dragging the thumb
//! moves it relative to the lock point; releasing selects. Every selection yields a
//! calibration sample pairing the gaze estimate at lock time with the release point.

use serde::{Deserialize, Serialize};

use crate::calibration::{CalibrationSample, Calibrator};
use crate::gaze::GazePipeline;
use crate::geometry::{screen_cm_to_pt, screen_pt_to_cm, DeviceProfile};
use crate::math::{Point2, Vec3};

use super::{
    check_event, classify_gesture, outcome_at, protocol, snap_to_nearest, CursorState, Gesture, GestureConfig,
    InteractionEngine, InteractionError, InteractionEvent, Phase, Step, TapMemory, TargetLayout, TouchTrack,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GazeSwipeConfig {
    /// Cursor displacement per unit of thumb displacement.
    pub drag_gain: f64,
    /// Snap the hover cursor onto the nearest element. When off, the cursor sits at
    /// the calibrated gaze point clamped to the screen.
    pub snapping: bool,
    pub gesture: GestureConfig,
}

impl Default for GazeSwipeConfig {
    fn default() -> Self {
        Self { drag_gain: 1.0, snapping: true, gesture: GestureConfig::default() }
    }
}

/// Gaze state captured when the cursor locks.
#[derive(Debug, Clone, Copy, PartialEq)]
struct LockMemo {
    g_est_cm: Point2,
    calibrated_cm: Point2,
    head_pose: Option<Vec3>,
}

#[derive(Debug, Clone)]
pub struct GazeSwipe {
    cfg: GazeSwipeConfig,
    pipeline: GazePipeline,
    calibrator: Calibrator,
    state: CursorState,
    touch: Option<TouchTrack>,
    lock: Option<LockMemo>,
    head_pose: Option<Vec3>,
    last_tap: Option<TapMemory>,
    last_t: Option<f64>,
    selections: u64,
}

impl GazeSwipe {
    /// A new engine in `phase` (usually `Inactive` until the edge double tap, or
    /// `Hover` for an already-activated session).
    pub fn new(cfg: GazeSwipeConfig, pipeline: GazePipeline, calibrator: Calibrator, phase: Phase) -> Self {
        let phase = if matches!(phase, Phase::Inactive) { Phase::Inactive } else { Phase::Hover };
        Self {
            cfg,
            pipeline,
            calibrator,
            state: CursorState::new(phase),
            touch: None,
            lock: None,
            head_pose: None,
            last_tap: None,
            last_t: None,
            selections: 0,
        }
    }

    pub fn config(&self) -> &GazeSwipeConfig {
        &self.cfg
    }

    pub fn calibrator(&self) -> &Calibrator {
        &self.calibrator
    }

    pub fn calibrator_mut(&mut self) -> &mut Calibrator {
        &mut self.calibrator
    }

    pub fn profile(&self) -> &DeviceProfile {
        self.pipeline.profile()
    }

    /// Timestamp of the last accepted event.
    pub fn last_event_time(&self) -> Option<f64> {
        self.last_t
    }

    /// Forgets smoothing history so the next frame starts a fresh fixation.
    pub fn restart_gaze_stream(&mut self) {
        self.pipeline.restart_stream();
    }

    /// The hover cursor for the latest calibrated gaze, and the element it snaps to.
    fn hover_cursor(&self, layout: &TargetLayout) -> (Option<Point2>, Option<u32>) {
        let Some(g_c) = self.state.calibrated_cm else {
            return (None, None);
        };
        let profile = self.pipeline.profile();
        let gaze_pt = screen_cm_to_pt(g_c, profile).unwrap_or(Point2::ZERO);
        let snapped = snap_to_nearest(gaze_pt, layout);
        if self.cfg.snapping {
            if let Some(e) = snapped.and_then(|id| layout.get(id)) {
                return (Some(e.rect_pt.center()), snapped);
            }
        }
        let size = profile.screen_size_pt();
        (Some(Point2::new(gaze_pt.x.clamp(0.0, size.x), gaze_pt.y.clamp(0.0, size.y))), snapped)
    }

    fn refresh_hover(&mut self, layout: &TargetLayout) {
        let (cursor, snapped) = self.hover_cursor(layout);
        self.state.current_pos_pt = cursor;
        self.state.snapped_element = snapped;
    }

    fn on_gaze(&mut self, frame: &crate::gaze::GazeFrame, layout: &TargetLayout) -> Result<Step, InteractionError> {
        let est = self.pipeline.estimate(frame, &self.calibrator)?;
        self.state.raw_gaze_cm = Some(est.uncalibrated_cm);
        self.state.calibrated_cm = Some(est.calibrated_cm);
        self.head_pose = frame.head_pose;
        if self.state.phase == Phase::Hover {
            self.refresh_hover(layout);
        }
        Ok(Step { state_changed: true, ..Step::default() })
    }

    fn on_touch_down(&mut self, t: f64, pos: Point2) -> Result<Step, InteractionError> {
        let (Some(locked), Some(g_e), Some(g_c)) =
            (self.state.current_pos_pt, self.state.raw_gaze_cm, self.state.calibrated_cm)
        else {
            return Err(InteractionError::NoGazeEstimate);
        };
        self.lock = Some(LockMemo { g_est_cm: g_e, calibrated_cm: g_c, head_pose: self.head_pose });
        self.touch = Some(TouchTrack::start(t, pos));
        self.state.phase = Phase::Locked;
        self.state.locked_pos_pt = Some(locked);
        self.state.current_pos_pt = Some(locked);
        self.state.touch_origin_pt = Some(pos);
        Ok(Step { state_changed: true, ..Step::default() })
    }

    fn dragged_cursor(&self, pos: Point2) -> Point2 {
        let locked = self.state.locked_pos_pt.unwrap_or(pos);
        let origin = self.state.touch_origin_pt.unwrap_or(pos);
        locked + (pos - origin) * self.cfg.drag_gain
    }

    fn on_touch_move(&mut self, t: f64, pos: Point2) -> Step {
        if let Some(track) = &mut self.touch {
            track.push(t, pos);
        }
        self.state.current_pos_pt = Some(self.dragged_cursor(pos));
        self.state.phase = Phase::Dragging;
        Step { state_changed: true, ..Step::default() }
    }

    fn on_touch_up(&mut self, t: f64, pos: Point2, layout: &TargetLayout) -> Result<Step, InteractionError> {
        let mut track = self.touch.clone().unwrap_or_else(|| TouchTrack::start(t, pos));
        track.push(t, pos);
        let profile = self.pipeline.profile().clone();
        let gesture = classify_gesture(&track.path, &profile, &self.cfg.gesture, self.last_tap);
        let locked = self.state.locked_pos_pt.unwrap_or(pos);
        let released = match gesture {
            Gesture::TapOnly => locked,
            _ => self.dragged_cursor(pos),
        };
        let mut step = Step { state_changed: true, gesture: Some(gesture), ..Step::default() };
        if gesture.selects() {
            let lock = self.lock.expect("a touch in progress always has a lock memo");
            let outcome = outcome_at(released, &track, gesture, Some(lock.calibrated_cm), layout, &profile);
            let g_gt = screen_pt_to_cm(released, &profile).map_err(crate::gaze::PipelineError::from)?;
            let sample = CalibrationSample::new(lock.g_est_cm, g_gt, lock.head_pose, t, self.selections);
            if self.calibrator.strategy().learns_from_interactions() {
                self.calibrator.record(sample)?;
                step.sample_recorded = true;
            }
            self.selections += 1;
            step.outcome = Some(outcome);
            step.sample = Some(sample);
        }
        self.last_tap = match gesture {
            Gesture::TapOnly => Some(TapMemory { released_t: t, pos_pt: pos }),
            _ => None,
        };
        self.touch = None;
        self.lock = None;
        self.state.phase = Phase::Hover;
        self.state.locked_pos_pt = None;
        self.state.touch_origin_pt = None;
        self.refresh_hover(layout);
        Ok(step)
    }

    fn on_edge(&mut self, layout: &TargetLayout) -> Step {
        match self.state.phase {
            Phase::Inactive => {
                self.state.phase = Phase::Hover;
                self.refresh_hover(layout);
            }
            _ => {
                self.state.phase = Phase::Inactive;
                self.state.snapped_element = None;
                self.state.current_pos_pt = None;
            }
        }
        self.last_tap = None;
        Step { state_changed: true, ..Step::default() }
    }
}

impl InteractionEngine for GazeSwipe {
    /// Applies one event. Events must be finite and in non-decreasing time order; a
    /// rejected event leaves the engine untouched.
    fn handle(&mut self, ev: &InteractionEvent, layout: &TargetLayout) -> Result<Step, InteractionError> {
        check_event(ev, self.last_t)?;
        let phase = self.state.phase;
        let step = match (phase, ev) {
            (_, InteractionEvent::GazeFrameArrived(frame)) => self.on_gaze(frame, layout)?,
            (Phase::Hover, InteractionEvent::TouchDown { t, pos_pt }) => self.on_touch_down(*t, *pos_pt)?,
            (Phase::Locked | Phase::Dragging, InteractionEvent::TouchMove { t, pos_pt }) => {
                self.on_touch_move(*t, *pos_pt)
            }
            (Phase::Locked | Phase::Dragging, InteractionEvent::TouchUp { t, pos_pt }) => {
                self.on_touch_up(*t, *pos_pt, layout)?
            }
            (Phase::Inactive | Phase::Hover, InteractionEvent::DoubleTapEdge { .. }) => self.on_edge(layout),
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
