use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::calibration::{CalibratorConfig, Strategy, WeightingMode};
use crate::gaze::{pose_walk_step, OneEuroConfig, SyntheticGazeConfig};
use crate::interaction::{GazeSwipeConfig, PureCursorConfig, Technique};
use crate::math::{Point2, Vec3};

use super::SimulationError;

/// Behavioural parameters of the simulated participant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulatedUser {
    /// Spread of the true fixation around the target centre (cm, per axis).
    pub fixation_jitter_cm: f64,
    /// Spread of the release point around the intended point (cm, per axis).
    pub motor_noise_cm: f64,
    pub reaction_time_s: f64,
    pub drag_speed_cm_s: f64,
    /// Gaze frames streamed during each fixation before the thumb comes down.
    pub settle_frames: u32,
    /// Resting thumb position as a fraction of the screen (width, height).
    pub thumb_home_fraction: Point2,
    pub tap_duration_s: f64,
    pub inter_trial_s: f64,
    /// Touch sampling rate while dragging.
    pub touch_rate_hz: f64,
}

impl Default for SimulatedUser {
    fn default() -> Self {
        Self {
            fixation_jitter_cm: 0.15,
            motor_noise_cm: 0.10,
            reaction_time_s: 0.45,
            drag_speed_cm_s: 2.5,
            settle_frames: 8,
            thumb_home_fraction: Point2::new(0.75, 0.8),
            tap_duration_s: 0.1,
            inter_trial_s: 0.2,
            touch_rate_hz: 60.0,
        }
    }
}

impl SimulatedUser {
    /// A user who looks and releases exactly on target.
    pub fn noiseless() -> Self {
        Self { fixation_jitter_cm: 0.0, motor_noise_cm: 0.0, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        let nonneg = [self.fixation_jitter_cm, self.motor_noise_cm, self.tap_duration_s, self.inter_trial_s];
        if nonneg.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(SimulationError::InvalidConfig("user noise and timing values must be nonnegative".into()));
        }
        if !(self.reaction_time_s > 0.0 && self.drag_speed_cm_s > 0.0 && self.touch_rate_hz > 0.0) {
            return Err(SimulationError::InvalidConfig("reaction time, drag speed and touch rate must be positive".into()));
        }
        if self.settle_frames == 0 {
            return Err(SimulationError::InvalidConfig("settle_frames must be at least 1".into()));
        }
        if self.tap_duration_s >= 0.3 {
            return Err(SimulationError::InvalidConfig("tap_duration_s must stay below the tap threshold".into()));
        }
        Ok(())
    }
}

/// Population-level parameters of the synthetic gaze source. Each simulated user
/// draws a personal bias. Each session starts from a posture displaced from the
/// user's habitual one and drifts toward another such posture as the user settles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GazeModelConfig {
    /// Per-axis standard deviation of the user bias (cm).
    pub bias_sigma_cm: f64,
    pub pose_gain_cm: [[f64; 3]; 2],
    /// Habitual head pose.
    pub base_pose: Vec3,
    /// Angular scale (rad) of the start and settled postures around `base_pose`.
    pub initial_pose_sigma: f64,
    /// Per-trial random-walk step (rad).
    pub pose_walk_sigma: f64,
    /// Fraction of the way to the settled posture travelled each trial.
    pub pose_relax_rate: f64,
    pub noise_sigma_cm: f64,
    pub frame_rate_hz: f64,
    pub filter: OneEuroConfig,
}

impl Default for GazeModelConfig {
    fn default() -> Self {
        Self::phone()
    }
}

impl GazeModelConfig {
    pub fn phone() -> Self {
        Self {
            bias_sigma_cm: 1.9,
            pose_gain_cm: [[4.0, 0.0, 0.0], [0.0, 4.0, 0.0]],
            base_pose: Vec3::Z,
            initial_pose_sigma: 0.4,
            pose_walk_sigma: 0.03,
            pose_relax_rate: 0.25,
            noise_sigma_cm: 0.8,
            frame_rate_hz: 12.0,
            filter: OneEuroConfig::default(),
        }
    }

    pub fn tablet() -> Self {
        Self { bias_sigma_cm: 2.4, ..Self::phone() }
    }

    pub fn for_device(name: &str) -> Self {
        match name {
            "tablet" => Self::tablet(),
            _ => Self::phone(),
        }
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        let nonneg = [
            self.bias_sigma_cm,
            self.initial_pose_sigma,
            self.pose_walk_sigma,
            self.noise_sigma_cm,
        ];
        if nonneg.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(SimulationError::InvalidConfig("gaze model sigmas must be nonnegative".into()));
        }
        if !(0.0..=1.0).contains(&self.pose_relax_rate) {
            return Err(SimulationError::InvalidConfig("pose_relax_rate must lie in [0, 1]".into()));
        }
        self.source_for(Point2::ZERO).validate().map_err(|e| SimulationError::InvalidConfig(e.to_string()))?;
        self.filter.validate().map_err(|e| SimulationError::InvalidConfig(e.to_string()))
    }

    /// The synthetic source for a user with the given bias.
    pub fn source_for(&self, user_bias_cm: Point2) -> SyntheticGazeConfig {
        SyntheticGazeConfig {
            user_bias_cm,
            pose_gain_cm: self.pose_gain_cm,
            base_pose: self.base_pose,
            noise_sigma_cm: self.noise_sigma_cm,
            pose_walk_sigma: self.pose_walk_sigma,
            frame_rate_hz: self.frame_rate_hz,
        }
    }

    pub fn draw_bias<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        Point2::new(x, y) * self.bias_sigma_cm
    }

    pub fn draw_start_pose<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec3 {
        pose_walk_step(self.base_pose, self.initial_pose_sigma, rng)
    }
}

/// Calibration settings shared by every strategy in an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationSettings {
    pub epsilon_cm: f64,
    pub weighting_mode: WeightingMode,
    pub clamp_negative_cosine: bool,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        let c = CalibratorConfig::default();
        Self { epsilon_cm: c.epsilon_cm, weighting_mode: c.weighting_mode, clamp_negative_cosine: c.clamp_negative_cosine }
    }
}

impl CalibrationSettings {
    pub fn for_strategy(&self, strategy: Strategy) -> CalibratorConfig {
        CalibratorConfig {
            epsilon_cm: self.epsilon_cm,
            weighting_mode: self.weighting_mode,
            clamp_negative_cosine: self.clamp_negative_cosine,
            strategy,
        }
    }
}

/// A full experiment: one device, one technique, a list of strategies and seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub device: String,
    pub technique: Technique,
    /// Ignored for the touch-only technique, which has no gaze to calibrate.
    pub strategies: Vec<Strategy>,
    pub targets_per_condition: u32,
    pub seeds: Vec<u64>,
    /// Defaults to the device's gaze model when absent.
    pub gaze: Option<GazeModelConfig>,
    pub user: SimulatedUser,
    pub calibration: CalibrationSettings,
    pub gaze_swipe: GazeSwipeConfig,
    pub pure_cursor: PureCursorConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            device: "phone".into(),
            technique: Technique::GazeSwipe,
            strategies: Strategy::ALL.to_vec(),
            targets_per_condition: 64,
            seeds: vec![0],
            gaze: None,
            user: SimulatedUser::default(),
            calibration: CalibrationSettings::default(),
            gaze_swipe: GazeSwipeConfig::default(),
            pure_cursor: PureCursorConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// The calibration-comparison protocol: four strategies, 64 targets each.
    pub fn calibration_study(device: &str) -> Self {
        Self { device: device.into(), ..Self::default() }
    }

    /// One technique with auto-calibration (or none, for the touch-only baseline).
    pub fn technique_study(device: &str, technique: Technique) -> Self {
        Self { device: device.into(), technique, strategies: vec![Strategy::Ac2], ..Self::default() }
    }

    pub fn gaze_model(&self) -> GazeModelConfig {
        self.gaze.clone().unwrap_or_else(|| GazeModelConfig::for_device(&self.device))
    }

    pub fn from_json(s: &str) -> Result<Self, SimulationError> {
        serde_json::from_str(s).map_err(|e| SimulationError::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs always serialize")
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        if self.targets_per_condition == 0 {
            return Err(SimulationError::InvalidConfig("targets_per_condition must be at least 1".into()));
        }
        if self.technique == Technique::GazeSwipe && self.strategies.is_empty() {
            return Err(SimulationError::InvalidConfig("at least one strategy is required".into()));
        }
        if !(self.gaze_swipe.drag_gain > 0.0 && self.pure_cursor.gain > 0.0) {
            return Err(SimulationError::InvalidConfig("cursor gains must be positive".into()));
        }
        self.user.validate()?;
        self.gaze_model().validate()
    }
}
