//! Synthetic participants and the seeded experiment harness.
//!
//! Every random quantity of a run is drawn from a stream keyed by the seed and its
//! purpose, so strategies within one seed see the same user, layout, target sequence,
//! head-pose trajectory, gaze noise and motor noise.

mod config;

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::calibration::{build_explicit_calibration, explicit_grid_pt, Calibrator, SampleStore, Strategy};
use crate::gaze::{pose_relax, pose_walk_step, synthetic_frame, GazePipeline, PipelineError, SyntheticGazeConfig};
use crate::geometry::{profile_by_name, screen_cm_to_pt, screen_pt_to_cm, DeviceProfile, GeometryError};
use crate::interaction::{
    generate_layout, Engine, GazeSwipe, Gesture, InteractionEngine, InteractionError, InteractionEvent, Phase,
    PureCursor, TargetLayout,
};
use crate::math::{Point2, Vec3};
use crate::metrics::{gaze_error, TrialRecord};
use crate::rng::{stream, SimRng, Stream};

pub use crate::interaction::Technique;
pub use config::{CalibrationSettings, ExperimentConfig, GazeModelConfig, SimulatedUser};

/// Strategy label recorded for the touch-only technique.
pub const NO_STRATEGY: &str = "none";

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Interaction(#[from] InteractionError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("trial {0} ended without a selection")]
    NoSelection(u32),
}

impl From<crate::interaction::LayoutError> for SimulationError {
    fn from(e: crate::interaction::LayoutError) -> Self {
        SimulationError::Interaction(e.into())
    }
}

impl From<crate::calibration::CalibrationError> for SimulationError {
    fn from(e: crate::calibration::CalibrationError) -> Self {
        SimulationError::Interaction(e.into())
    }
}

/// Metrics of one simulated selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub gaze_error_cm: f64,
    pub thumb_distance_cm: f64,
    pub completion_time_s: f64,
    pub success: bool,
    pub gesture: Gesture,
    pub timestamp_s: f64,
    pub sample_recorded: bool,
}

/// Everything a trial needs besides the engine and random streams.
#[derive(Debug, Clone, Copy)]
pub struct TrialContext<'a> {
    pub profile: &'a DeviceProfile,
    pub user: &'a SimulatedUser,
    pub source: &'a SyntheticGazeConfig,
    pub pose: Vec3,
}

fn normal2<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> Point2 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    Point2::new(x, y) * sigma
}

fn thumb_home_pt(profile: &DeviceProfile, user: &SimulatedUser) -> Point2 {
    let size = profile.screen_size_pt();
    Point2::new(size.x * user.thumb_home_fraction.x, size.y * user.thumb_home_fraction.y)
}

/// Streams a fixation on `target_cm` through the engine, ending `settle_frames`
/// frames later. Returns the time the last frame was sent.
fn fixate(
    engine: &mut GazeSwipe,
    layout: &TargetLayout,
    fixation_cm: Point2,
    ctx: &TrialContext<'_>,
    t0: f64,
    gaze_rng: &mut SimRng,
) -> Result<f64, SimulationError> {
    engine.restart_gaze_stream();
    let dt = ctx.source.frame_interval_s();
    let mut t = t0;
    for k in 0..ctx.user.settle_frames {
        t = t0 + f64::from(k) * dt;
        let frame = synthetic_frame(fixation_cm, t, ctx.source, ctx.pose, ctx.profile, gaze_rng);
        engine.handle(&InteractionEvent::GazeFrameArrived(frame), layout)?;
    }
    Ok(t)
}

/// Drags the thumb in a straight line from `from` by `disp` (pt) at the user's drag
/// speed and releases. Returns the release time.
fn swipe(
    engine: &mut Engine,
    layout: &TargetLayout,
    ctx: &TrialContext<'_>,
    from: Point2,
    disp: Point2,
    t_down: f64,
) -> Result<(f64, crate::interaction::Step), SimulationError> {
    let scale = ctx.profile.pt_per_cm();
    let length_cm = Point2::new(disp.x / scale.x, disp.y / scale.y).norm();
    let duration = length_cm / ctx.user.drag_speed_cm_s;
    let steps = ((duration * ctx.user.touch_rate_hz).ceil() as u32).max(1);
    for k in 1..steps {
        let f = f64::from(k) / f64::from(steps);
        engine.handle(&InteractionEvent::TouchMove { t: t_down + duration * f, pos_pt: from + disp * f }, layout)?;
    }
    let t_up = t_down + duration;
    let step = engine.handle(&InteractionEvent::TouchUp { t: t_up, pos_pt: from + disp }, layout)?;
    Ok((t_up, step))
}

/// Runs one selection of the layout's current target.
///
/// Under GazeSwipe the user fixates the target centre (plus jitter) while gaze frames
/// settle, puts the thumb down, and then either taps (cursor already on the target) or
/// drags the locked cursor to the target centre plus motor noise. Under Pure Cursor the
/// user swipes from the thumb's resting point so the extended cursor lands there.
/// Completion time is `reaction_time + drag_length / drag_speed`.
pub fn run_trial(
    engine: &mut Engine,
    layout: &TargetLayout,
    ctx: &TrialContext<'_>,
    clock: &mut f64,
    gaze_rng: &mut SimRng,
    motor_rng: &mut SimRng,
    trial_idx: u32,
) -> Result<TrialResult, SimulationError> {
    let target = *layout.target().ok_or(SimulationError::NoSelection(trial_idx))?;
    let target_cm = screen_pt_to_cm(target.rect_pt.center(), ctx.profile)?;
    let jitter = normal2(gaze_rng, ctx.user.fixation_jitter_cm);
    let motor = normal2(motor_rng, ctx.user.motor_noise_cm);
    let aim_pt = screen_cm_to_pt(target_cm + motor, ctx.profile)?;
    let home = thumb_home_pt(ctx.profile, ctx.user);

    let (t_up, step) = match engine {
        Engine::GazeSwipe(gs) => {
            let last = fixate(gs, layout, target_cm + jitter, ctx, *clock, gaze_rng)?;
            let t_down = last + ctx.source.frame_interval_s();
            gs.handle(&InteractionEvent::TouchDown { t: t_down, pos_pt: home }, layout)?;
            let locked = gs.state().locked_pos_pt.expect("locked after touch down");
            if target.rect_pt.contains(locked) {
                let t_up = t_down + ctx.user.tap_duration_s;
                (t_up, gs.handle(&InteractionEvent::TouchUp { t: t_up, pos_pt: home }, layout)?)
            } else {
                let disp = (aim_pt - locked) * (1.0 / gs.config().drag_gain);
                swipe(engine, layout, ctx, home, disp, t_down)?
            }
        }
        Engine::PureCursor(_) => {
            let t_down = *clock + ctx.user.reaction_time_s;
            engine.handle(&InteractionEvent::TouchDown { t: t_down, pos_pt: home }, layout)?;
            let gain = match engine {
                Engine::PureCursor(pc) => pc.config().gain,
                Engine::GazeSwipe(_) => unreachable!(),
            };
            swipe(engine, layout, ctx, home, (aim_pt - home) * (1.0 / gain), t_down)?
        }
    };
    *clock = t_up + ctx.user.inter_trial_s;
    let outcome = step.outcome.ok_or(SimulationError::NoSelection(trial_idx))?;
    let drag_time = match outcome.gesture {
        Gesture::TapOnly => 0.0,
        _ => outcome.thumb_distance_cm / ctx.user.drag_speed_cm_s,
    };
    Ok(TrialResult {
        gaze_error_cm: outcome.gaze_at_lock_cm.map_or(0.0, |g| gaze_error(g, outcome.released_pos_cm)),
        thumb_distance_cm: outcome.thumb_distance_cm,
        completion_time_s: ctx.user.reaction_time_s + drag_time,
        success: outcome.success,
        gesture: outcome.gesture,
        timestamp_s: t_up,
        sample_recorded: step.sample_recorded,
    })
}

/// Nine fixations on the explicit-calibration grid at the given pose, each observed as
/// the settled pipeline estimate.
pub fn explicit_calibration(
    profile: &DeviceProfile,
    model: &GazeModelConfig,
    source: &SyntheticGazeConfig,
    user: &SimulatedUser,
    pose: Vec3,
    rng: &mut SimRng,
) -> Result<SampleStore, SimulationError> {
    let grid = explicit_grid_pt(profile);
    let mut pipeline = GazePipeline::new(profile.clone(), model.filter)?;
    let nc = Calibrator::new(Default::default());
    let mut observed = Vec::with_capacity(grid.len());
    for &p in &grid {
        pipeline.restart_stream();
        let fixation = screen_pt_to_cm(p, profile)? + normal2(rng, user.fixation_jitter_cm);
        let mut last = Point2::ZERO;
        for k in 0..user.settle_frames {
            let t = f64::from(k) * source.frame_interval_s();
            let frame = synthetic_frame(fixation, t, source, pose, profile, rng);
            last = pipeline.estimate(&frame, &nc)?.uncalibrated_cm;
        }
        observed.push(last);
    }
    Ok(build_explicit_calibration(profile, &grid, &observed, &vec![Some(pose); grid.len()])?)
}

/// Target ids for a condition: uniform over the layout, never the same twice in a row.
pub fn target_sequence(seed: u64, count: u32, elements: usize) -> Vec<u32> {
    let mut rng = stream(seed, Stream::Targets);
    let mut out: Vec<u32> = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let id = match out.last() {
            None => rng.random_range(0..elements as u32),
            Some(&prev) => {
                let r = rng.random_range(0..elements as u32 - 1);
                if r >= prev {
                    r + 1
                } else {
                    r
                }
            }
        };
        out.push(id);
    }
    out
}

/// Head pose over a session. The session starts in one posture and, through a random
/// walk, settles into another; both are drawn around the habitual pose.
#[derive(Debug, Clone)]
pub struct PoseProcess {
    rng: SimRng,
    pose: Vec3,
    settled: Vec3,
    walk_sigma: f64,
    relax_rate: f64,
}

impl PoseProcess {
    pub fn new(seed: u64, model: &GazeModelConfig) -> Self {
        let mut rng = stream(seed, Stream::Pose);
        let pose = model.draw_start_pose(&mut rng);
        let settled = model.draw_start_pose(&mut rng);
        Self { rng, pose, settled, walk_sigma: model.pose_walk_sigma, relax_rate: model.pose_relax_rate }
    }

    pub fn current(&self) -> Vec3 {
        self.pose
    }

    /// Moves to the next trial's pose and returns it.
    pub fn advance(&mut self) -> Vec3 {
        self.pose = pose_relax(pose_walk_step(self.pose, self.walk_sigma, &mut self.rng), self.settled, self.relax_rate);
        self.pose
    }
}

/// Head pose at each of `count` trials.
pub fn pose_trajectory(seed: u64, count: u32, model: &GazeModelConfig) -> Vec<Vec3> {
    let mut process = PoseProcess::new(seed, model);
    let mut out = Vec::with_capacity(count as usize);
    for i in 0..count {
        out.push(if i == 0 { process.current() } else { process.advance() });
    }
    out
}

fn new_engine(cfg: &ExperimentConfig, profile: &DeviceProfile, model: &GazeModelConfig, strategy: Strategy) -> Result<Engine, SimulationError> {
    Ok(match cfg.technique {
        Technique::GazeSwipe => {
            let pipeline = GazePipeline::new(profile.clone(), model.filter)?;
            let calibrator = Calibrator::new(cfg.calibration.for_strategy(strategy));
            Engine::GazeSwipe(Box::new(GazeSwipe::new(cfg.gaze_swipe, pipeline, calibrator, Phase::Hover)))
        }
        Technique::PureCursor => Engine::PureCursor(PureCursor::new(cfg.pure_cursor, profile.clone())),
    })
}

/// Runs every condition of one seed. Records are ordered by strategy, then trial.
pub fn run_seed(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<TrialRecord>, SimulationError> {
    cfg.validate()?;
    let profile = profile_by_name(&cfg.device)?;
    let model = cfg.gaze_model();
    let bias = model.draw_bias(&mut stream(seed, Stream::User));
    let source = model.source_for(bias);
    let mut layout = generate_layout(seed, &profile)?;
    let targets = target_sequence(seed, cfg.targets_per_condition, layout.elements.len());
    let poses = pose_trajectory(seed, cfg.targets_per_condition, &model);
    let conditions: Vec<Option<Strategy>> = match cfg.technique {
        Technique::GazeSwipe => cfg.strategies.iter().copied().map(Some).collect(),
        Technique::PureCursor => vec![None],
    };

    let mut records = Vec::with_capacity(conditions.len() * targets.len());
    for strategy in conditions {
        let mut engine = new_engine(cfg, &profile, &model, strategy.unwrap_or(Strategy::Nc))?;
        if strategy == Some(Strategy::Ec) {
            let mut rng = stream(seed, Stream::ExplicitCalibration);
            let store = explicit_calibration(&profile, &model, &source, &cfg.user, poses[0], &mut rng)?;
            if let Some(gs) = engine.as_gaze_swipe_mut() {
                gs.calibrator_mut().install_store(store);
            }
        }
        let mut gaze_rng = stream(seed, Stream::GazeNoise);
        let mut motor_rng = stream(seed, Stream::Motor);
        let mut clock = 0.0;
        for (i, (&target, &pose)) in targets.iter().zip(&poses).enumerate() {
            layout.set_target(target)?;
            let ctx = TrialContext { profile: &profile, user: &cfg.user, source: &source, pose };
            let r = run_trial(&mut engine, &layout, &ctx, &mut clock, &mut gaze_rng, &mut motor_rng, i as u32)?;
            records.push(TrialRecord {
                trial_idx: i as u32,
                seed,
                device: profile.name.clone(),
                strategy: strategy.map_or(NO_STRATEGY.to_string(), |s| s.to_string()),
                technique: cfg.technique.to_string(),
                gaze_error_cm: r.gaze_error_cm,
                thumb_distance_cm: r.thumb_distance_cm,
                completion_time_s: r.completion_time_s,
                success: r.success,
                gesture: r.gesture.as_str().to_string(),
                timestamp_s: r.timestamp_s,
            });
        }
    }
    Ok(records)
}

/// Runs all seeds of the experiment, in seed-list order. Seeds are independent and
/// run on worker threads; the output does not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>, SimulationError> {
    cfg.validate()?;
    profile_by_name(&cfg.device)?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cfg.seeds.len().max(1));
    let chunk = cfg.seeds.len().div_ceil(workers).max(1);
    let results: Vec<Result<Vec<TrialRecord>, SimulationError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .seeds
            .chunks(chunk)
            .map(|seeds| {
                scope.spawn(move || {
                    let mut out = Vec::new();
                    for &seed in seeds {
                        out.extend(run_seed(cfg, seed)?);
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("simulation worker panicked")).collect()
    });
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    Ok(records)
}
