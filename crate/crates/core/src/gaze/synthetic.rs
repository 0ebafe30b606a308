//! Synthetic gaze source: a parametric stand-in for an appearance-based estimator.
//!
//! The raw estimate for a fixation on `g` (screen cm) is
//! `camera(g) + user_bias + M·(pose − base_pose) + ε` with `ε ~ N(0, σ²I₂)`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{screen_cm_to_camera_cm, DeviceProfile};
use crate::math::{tangent_basis, Point2, Vec3};

use super::GazeFrame;

#[derive(Debug, Error, PartialEq)]
#[error("invalid synthetic gaze config: {0}")]
pub struct SyntheticConfigError(pub &'static str);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticGazeConfig {
    pub user_bias_cm: Point2,
    /// Maps a head-pose displacement (unit-vector difference) to a gaze offset in cm.
    pub pose_gain_cm: [[f64; 3]; 2],
    pub base_pose: Vec3,
    pub noise_sigma_cm: f64,
    pub pose_walk_sigma: f64,
    pub frame_rate_hz: f64,
}

impl Default for SyntheticGazeConfig {
    fn default() -> Self {
        Self {
            user_bias_cm: Point2::ZERO,
            pose_gain_cm: [[4.0, 0.0, 0.0], [0.0, 4.0, 0.0]],
            base_pose: Vec3::Z,
            noise_sigma_cm: 0.8,
            pose_walk_sigma: 0.03,
            frame_rate_hz: 12.0,
        }
    }
}

impl SyntheticGazeConfig {
    /// A source with no error at all: every frame maps back to the fixated point.
    pub fn perfect() -> Self {
        Self {
            pose_gain_cm: [[0.0; 3]; 2],
            noise_sigma_cm: 0.0,
            pose_walk_sigma: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SyntheticConfigError> {
        if !self.user_bias_cm.is_finite() || self.pose_gain_cm.iter().flatten().any(|v| !v.is_finite()) {
            return Err(SyntheticConfigError("bias and pose gain must be finite"));
        }
        if !self.base_pose.is_unit() {
            return Err(SyntheticConfigError("base_pose must be a unit vector"));
        }
        if !(self.noise_sigma_cm >= 0.0 && self.noise_sigma_cm.is_finite()) {
            return Err(SyntheticConfigError("noise_sigma_cm must be nonnegative"));
        }
        if !(self.pose_walk_sigma >= 0.0 && self.pose_walk_sigma.is_finite()) {
            return Err(SyntheticConfigError("pose_walk_sigma must be nonnegative"));
        }
        if !(5.0..=60.0).contains(&self.frame_rate_hz) {
            return Err(SyntheticConfigError("frame_rate_hz must lie in [5, 60]"));
        }
        Ok(())
    }

    pub fn frame_interval_s(&self) -> f64 {
        1.0 / self.frame_rate_hz
    }

    /// Systematic (noise-free) offset contributed by the head pose.
    pub fn pose_offset_cm(&self, pose: Vec3) -> Point2 {
        let d = pose - self.base_pose;
        let m = &self.pose_gain_cm;
        Point2::new(
            m[0][0] * d.x + m[0][1] * d.y + m[0][2] * d.z,
            m[1][0] * d.x + m[1][1] * d.y + m[1][2] * d.z,
        )
    }
}

/// Moves `pose` along the sphere by a Gaussian tangent step of scale `sigma`.
/// The angular distance travelled equals the norm of the tangent step.
pub fn pose_walk_step<R: Rng + ?Sized>(pose: Vec3, sigma: f64, rng: &mut R) -> Vec3 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    if sigma == 0.0 {
        return pose;
    }
    let (e1, e2) = tangent_basis(pose);
    let step = e1 * (a * sigma) + e2 * (b * sigma);
    let angle = step.norm();
    let Some(dir) = step.normalized() else {
        return pose;
    };
    let moved = pose * angle.cos() + dir * angle.sin();
    moved.normalized().unwrap_or(pose)
}

/// Pulls `pose` a fraction `rate` of the way back toward `home` (chordal blend,
/// renormalized). `rate = 0` returns `pose` unchanged.
pub fn pose_relax(pose: Vec3, home: Vec3, rate: f64) -> Vec3 {
    if rate == 0.0 {
        return pose;
    }
    (pose * (1.0 - rate) + home * rate).normalized().unwrap_or(home)
}

/// Produces one raw frame for a fixation on `true_gaze_cm` (screen cm).
pub fn synthetic_frame<R: Rng + ?Sized>(
    true_gaze_cm: Point2,
    t: f64,
    cfg: &SyntheticGazeConfig,
    pose: Vec3,
    profile: &DeviceProfile,
    rng: &mut R,
) -> GazeFrame {
    let ex: f64 = rng.sample(StandardNormal);
    let ey: f64 = rng.sample(StandardNormal);
    let noise = Point2::new(ex, ey) * cfg.noise_sigma_cm;
    let raw = screen_cm_to_camera_cm(true_gaze_cm, profile) + cfg.user_bias_cm + cfg.pose_offset_cm(pose) + noise;
    GazeFrame { timestamp_s: t, raw_cm: raw, head_pose: Some(pose) }
}
