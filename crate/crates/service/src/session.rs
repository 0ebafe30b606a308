//! One live session: a layout, an interaction engine and its metrics, driven by
//! client messages. Responses are a pure function of the creation request and the
//! ordered client messages.

use std::str::FromStr;

use gazeswipe_core::calibration::{Calibrator, Strategy};
use gazeswipe_core::gaze::{synthetic_frame, GazeFrame, GazePipeline, SyntheticGazeConfig};
use gazeswipe_core::geometry::{profile_by_name, screen_pt_to_cm, DeviceProfile};
use gazeswipe_core::interaction::{
    generate_layout, Element, Engine, GazeSwipe, InteractionEngine, InteractionEvent, Phase, PureCursor, Step,
    TargetLayout,
};
use gazeswipe_core::math::{Point2, Vec3};
use gazeswipe_core::metrics::{gaze_error, sliding_window_error, summarize, TrialRecord};
use gazeswipe_core::rng::{stream, SimRng, Stream};
use gazeswipe_core::simulation::{
    explicit_calibration, ExperimentConfig, GazeModelConfig, PoseProcess, SimulatedUser, Technique, NO_STRATEGY,
};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wire::{parse_client, ClientMessage, Envelope, MetricsSnapshot, ServerMessage, WindowSeries};

pub const WINDOW: usize = 16;
pub const WINDOW_STEP: usize = 4;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("unknown profile {0:?}")]
    UnknownProfile(String),
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("unknown technique {0:?}")]
    UnknownTechnique(String),
    #[error("invalid session request: {0}")]
    Invalid(String),
    #[error("no session {0:?}")]
    NotFound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GazeMode {
    /// The service fixates the current target itself before every touch-down.
    Synthetic,
    /// The client streams true gaze positions, which the service corrupts.
    #[default]
    ClientProxy,
}

fn default_technique() -> String {
    Technique::GazeSwipe.to_string()
}

fn default_strategy() -> String {
    Strategy::Ac2.to_string()
}

fn default_profile() -> String {
    "phone".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateSessionRequest {
    #[serde(default = "default_profile")]
    pub profile: String,
    #[serde(default = "default_strategy")]
    pub strategy: String,
    #[serde(default = "default_technique")]
    pub technique: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub gaze_mode: GazeMode,
    /// Gaze corruption model; defaults to the profile's synthetic model.
    #[serde(default)]
    pub gaze: Option<GazeModelConfig>,
}

impl Default for CreateSessionRequest {
    fn default() -> Self {
        Self {
            profile: default_profile(),
            strategy: default_strategy(),
            technique: default_technique(),
            seed: 0,
            gaze_mode: GazeMode::default(),
            gaze: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionDescriptor {
    pub id: String,
    pub profile: DeviceProfile,
    pub strategy: String,
    pub technique: Technique,
    pub seed: u64,
    pub gaze_mode: GazeMode,
    pub screen_pt: (u32, u32),
    pub elements: Vec<Element>,
    pub target_id: Option<u32>,
}

/// Everything a message may change. Messages run against a copy that is committed
/// only when the message succeeds.
#[derive(Debug, Clone)]
struct SessionState {
    profile: DeviceProfile,
    technique: Technique,
    gaze_mode: GazeMode,
    seed: u64,
    model: GazeModelConfig,
    source: SyntheticGazeConfig,
    user: SimulatedUser,
    layout: TargetLayout,
    engine: Engine,
    gaze_rng: SimRng,
    target_rng: SimRng,
    explicit_rng: SimRng,
    pose: PoseProcess,
    records: Vec<TrialRecord>,
    target_shown_t: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    state: SessionState,
    seq: u64,
}

fn parse_strategy(s: &str) -> Result<Strategy, SessionError> {
    Strategy::from_str(s).map_err(|_| SessionError::UnknownStrategy(s.to_string()))
}

fn interaction_error(e: &gazeswipe_core::interaction::InteractionError) -> ServerMessage {
    ServerMessage::error(e.code(), e.to_string())
}

impl Session {
    pub fn new(id: impl Into<String>, req: &CreateSessionRequest) -> Result<Self, SessionError> {
        let profile = profile_by_name(&req.profile).map_err(|_| SessionError::UnknownProfile(req.profile.clone()))?;
        let strategy = parse_strategy(&req.strategy)?;
        let technique =
            Technique::from_str(&req.technique).map_err(|_| SessionError::UnknownTechnique(req.technique.clone()))?;
        let model = req.gaze.clone().unwrap_or_else(|| GazeModelConfig::for_device(&profile.name));
        model.validate().map_err(|e| SessionError::Invalid(e.to_string()))?;
        let defaults = ExperimentConfig::default();
        let seed = req.seed;
        let source = model.source_for(model.draw_bias(&mut stream(seed, Stream::User)));
        let mut target_rng = stream(seed, Stream::Targets);
        let mut layout = generate_layout(seed, &profile).map_err(|e| SessionError::Invalid(e.to_string()))?;
        let first = target_rng.random_range(0..layout.elements.len() as u32);
        layout.set_target(first).map_err(|e| SessionError::Invalid(e.to_string()))?;
        let engine = match technique {
            Technique::GazeSwipe => {
                let pipeline =
                    GazePipeline::new(profile.clone(), model.filter).map_err(|e| SessionError::Invalid(e.to_string()))?;
                let calibrator = Calibrator::new(defaults.calibration.for_strategy(strategy));
                Engine::GazeSwipe(Box::new(GazeSwipe::new(defaults.gaze_swipe, pipeline, calibrator, Phase::Hover)))
            }
            Technique::PureCursor => Engine::PureCursor(PureCursor::new(defaults.pure_cursor, profile.clone())),
        };
        let mut state = SessionState {
            pose: PoseProcess::new(seed, &model),
            profile,
            technique,
            gaze_mode: req.gaze_mode,
            seed,
            model,
            source,
            user: defaults.user,
            layout,
            engine,
            gaze_rng: stream(seed, Stream::GazeNoise),
            target_rng,
            explicit_rng: stream(seed, Stream::ExplicitCalibration),
            records: Vec::new(),
            target_shown_t: None,
        };
        state.install_explicit_store().map_err(|e| SessionError::Invalid(e.to_string()))?;
        Ok(Self { id: id.into(), state, seq: 0 })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn descriptor(&self) -> SessionDescriptor {
        let s = &self.state;
        SessionDescriptor {
            id: self.id.clone(),
            profile: s.profile.clone(),
            strategy: s.strategy_label(),
            technique: s.technique,
            seed: s.seed,
            gaze_mode: s.gaze_mode,
            screen_pt: s.profile.screen_pt,
            elements: s.layout.elements.clone(),
            target_id: s.layout.target_id(),
        }
    }

    pub fn phase(&self) -> Phase {
        self.state.engine.state().phase
    }

    pub fn records(&self) -> &[TrialRecord] {
        &self.state.records
    }

    pub fn metrics(&self) -> MetricsSnapshot {
        self.state.metrics()
    }

    /// Handles one raw text message. Every message, valid or not, consumes one
    /// sequence number and yields at least one response.
    pub fn handle_text(&mut self, text: &str) -> Vec<Envelope> {
        let parsed = parse_client(text);
        self.respond(parsed)
    }

    pub fn handle_value(&mut self, value: serde_json::Value) -> Vec<Envelope> {
        let parsed = crate::wire::parse_client_value(value);
        self.respond(parsed)
    }

    pub fn handle(&mut self, msg: ClientMessage) -> Vec<Envelope> {
        self.respond(Ok(msg))
    }

    fn respond(&mut self, parsed: Result<ClientMessage, ServerMessage>) -> Vec<Envelope> {
        self.seq += 1;
        let out = match parsed {
            Err(e) => vec![e],
            Ok(msg) => {
                let mut next = self.state.clone();
                match next.apply(&msg) {
                    Ok(out) => {
                        self.state = next;
                        out
                    }
                    Err(e) => vec![e],
                }
            }
        };
        out.into_iter().map(|message| Envelope { seq: self.seq, message }).collect()
    }
}

impl SessionState {
    fn strategy(&self) -> Option<Strategy> {
        self.engine.as_gaze_swipe().map(|g| g.calibrator().strategy())
    }

    fn strategy_label(&self) -> String {
        self.strategy().map_or(NO_STRATEGY.to_string(), |s| s.to_string())
    }

    /// Explicit calibration runs as nine simulated fixations at the current pose.
    fn install_explicit_store(&mut self) -> Result<(), gazeswipe_core::simulation::SimulationError> {
        if self.strategy() != Some(Strategy::Ec) {
            return Ok(());
        }
        let store = explicit_calibration(
            &self.profile,
            &self.model,
            &self.source,
            &self.user,
            self.pose.current(),
            &mut self.explicit_rng,
        )?;
        if let Some(gs) = self.engine.as_gaze_swipe_mut() {
            gs.calibrator_mut().install_store(store);
        }
        Ok(())
    }

    fn cursor_state(&self) -> ServerMessage {
        let s = self.engine.state();
        ServerMessage::CursorState {
            phase: s.phase,
            snapped_id: s.snapped_element,
            current_pt: s.current_pos_pt,
            calibrated_cm: s.calibrated_cm,
        }
    }

    fn apply(&mut self, msg: &ClientMessage) -> Result<Vec<ServerMessage>, ServerMessage> {
        match *msg {
            ClientMessage::GazeFrame { t, x_cm, y_cm, head_pose } => self.on_gaze(t, Point2::new(x_cm, y_cm), head_pose),
            ClientMessage::TouchDown { t, x_pt, y_pt } => {
                let mut out = Vec::new();
                if self.gaze_mode == GazeMode::Synthetic && self.engine.technique() == Technique::GazeSwipe {
                    out.extend(self.fixate_target(t)?);
                }
                let ev = InteractionEvent::TouchDown { t, pos_pt: Point2::new(x_pt, y_pt) };
                out.extend(self.on_event(&ev)?);
                if self.target_shown_t.is_none() {
                    self.target_shown_t = Some(t);
                }
                Ok(out)
            }
            ClientMessage::TouchMove { t, x_pt, y_pt } => {
                self.on_event(&InteractionEvent::TouchMove { t, pos_pt: Point2::new(x_pt, y_pt) })
            }
            ClientMessage::TouchUp { t, x_pt, y_pt } => {
                self.on_event(&InteractionEvent::TouchUp { t, pos_pt: Point2::new(x_pt, y_pt) })
            }
            ClientMessage::DoubleTapEdge { t } => self.on_event(&InteractionEvent::DoubleTapEdge { t }),
            ClientMessage::SetStrategy { ref strategy, .. } => self.set_strategy(strategy),
            ClientMessage::MetricsSnapshot { .. } => Ok(vec![ServerMessage::MetricsSnapshot(self.metrics())]),
        }
    }

    fn on_gaze(&mut self, t: f64, true_cm: Point2, head_pose: Option<Vec3>) -> Result<Vec<ServerMessage>, ServerMessage> {
        if self.gaze_mode == GazeMode::Synthetic {
            return Err(ServerMessage::error("protocol", "gaze is generated by the service in synthetic mode"));
        }
        if !true_cm.is_finite() {
            return Err(ServerMessage::error("invalid", "gaze position must be finite"));
        }
        let pose = match head_pose {
            Some(h) if !h.is_unit() => return Err(ServerMessage::error("invalid", "head_pose must be a unit vector")),
            Some(h) => h,
            None => self.pose.current(),
        };
        let mut frame = synthetic_frame(true_cm, t, &self.source, pose, &self.profile, &mut self.gaze_rng);
        frame.head_pose = Some(pose);
        self.on_event(&InteractionEvent::GazeFrameArrived(frame))
    }

    /// Streams the settle frames of a fixation on the current target, ending just
    /// before `t_down`.
    fn fixate_target(&mut self, t_down: f64) -> Result<Vec<ServerMessage>, ServerMessage> {
        let Some(target) = self.layout.target().copied() else {
            return Ok(Vec::new());
        };
        let Some(gs) = self.engine.as_gaze_swipe_mut() else {
            return Ok(Vec::new());
        };
        let last = gs.last_event_time();
        let n = self.user.settle_frames;
        let mut dt = self.source.frame_interval_s();
        let mut start = t_down - f64::from(n) * dt;
        if let Some(prev) = last {
            if prev >= t_down {
                // no room for fresh frames; the touch-down decides on its own
                return Ok(Vec::new());
            }
            if start <= prev {
                dt = (t_down - prev) / f64::from(n + 1);
                start = prev + dt;
            }
        }
        gs.restart_gaze_stream();
        let jx: f64 = self.gaze_rng.sample(StandardNormal);
        let jy: f64 = self.gaze_rng.sample(StandardNormal);
        let centre = screen_pt_to_cm(target.rect_pt.center(), &self.profile).expect("layout points are finite");
        let fixation = centre + Point2::new(jx, jy) * self.user.fixation_jitter_cm;
        let pose = self.pose.current();
        for k in 0..n {
            let t = start + f64::from(k) * dt;
            let frame: GazeFrame = synthetic_frame(fixation, t, &self.source, pose, &self.profile, &mut self.gaze_rng);
            gs.handle(&InteractionEvent::GazeFrameArrived(frame), &self.layout).map_err(|e| interaction_error(&e))?;
        }
        Ok(vec![self.cursor_state()])
    }

    fn on_event(&mut self, ev: &InteractionEvent) -> Result<Vec<ServerMessage>, ServerMessage> {
        let step = self.engine.handle(ev, &self.layout).map_err(|e| interaction_error(&e))?;
        Ok(self.after_step(ev.timestamp(), step))
    }

    fn after_step(&mut self, t: f64, step: Step) -> Vec<ServerMessage> {
        let mut out = Vec::new();
        if let Some(o) = step.outcome {
            self.records.push(TrialRecord {
                trial_idx: self.records.len() as u32,
                seed: self.seed,
                device: self.profile.name.clone(),
                strategy: self.strategy_label(),
                technique: self.technique.to_string(),
                gaze_error_cm: o.gaze_at_lock_cm.map_or(0.0, |g| gaze_error(g, o.released_pos_cm)),
                thumb_distance_cm: o.thumb_distance_cm,
                completion_time_s: t - self.target_shown_t.unwrap_or(t),
                success: o.success,
                gesture: o.gesture.as_str().to_string(),
                timestamp_s: t,
            });
            let next = self.advance_target();
            self.pose.advance();
            self.target_shown_t = Some(t);
            out.push(ServerMessage::Selection {
                released_pt: o.released_pos_pt,
                hit_id: o.hit_element,
                target_id: o.target_id,
                success: o.success,
                thumb_distance_cm: o.thumb_distance_cm,
                duration_s: o.duration_s,
                gesture: o.gesture,
                next_target_id: next,
            });
        }
        if let Some(s) = step.sample {
            out.push(ServerMessage::SampleRecorded {
                g_est_cm: s.g_est_cm,
                g_gt_cm: s.g_gt_cm,
                offset_cm: s.offset(),
                stored: step.sample_recorded,
            });
        }
        if step.state_changed {
            out.push(self.cursor_state());
        }
        out
    }

    /// Picks the next target uniformly, never repeating the current one.
    fn advance_target(&mut self) -> Option<u32> {
        let n = self.layout.elements.len() as u32;
        let current = self.layout.target_id()?;
        if n < 2 {
            return Some(current);
        }
        let mut next = self.target_rng.random_range(0..n - 1);
        if next >= current {
            next += 1;
        }
        self.layout.set_target(next).ok()?;
        Some(next)
    }

    fn set_strategy(&mut self, name: &str) -> Result<Vec<ServerMessage>, ServerMessage> {
        let strategy = parse_strategy(name).map_err(|e| ServerMessage::error("invalid", e.to_string()))?;
        let Some(gs) = self.engine.as_gaze_swipe_mut() else {
            return Err(ServerMessage::error("invalid", "the touch-only technique has no calibration strategy"));
        };
        if matches!(gs.state().phase, Phase::Locked | Phase::Dragging) {
            return Err(ServerMessage::error("protocol", "cannot switch strategy during a touch"));
        }
        gs.calibrator_mut().reset(strategy);
        self.install_explicit_store().map_err(|e| ServerMessage::error("invalid", e.to_string()))?;
        Ok(vec![self.cursor_state()])
    }

    fn metrics(&self) -> MetricsSnapshot {
        let groups = if self.records.is_empty() {
            Vec::new()
        } else {
            summarize(&self.records, self.seed).map(|s| s.groups).unwrap_or_default()
        };
        let mut windows: Vec<WindowSeries> = Vec::new();
        for r in &self.records {
            if !windows.iter().any(|w| w.strategy == r.strategy) {
                let errors: Vec<f64> =
                    self.records.iter().filter(|x| x.strategy == r.strategy).map(|x| x.gaze_error_cm).collect();
                let points = sliding_window_error(&errors, WINDOW, WINDOW_STEP).unwrap_or_default();
                windows.push(WindowSeries { strategy: r.strategy.clone(), points });
            }
        }
        MetricsSnapshot { selections: self.records.len(), groups, windows }
    }
}
