use thiserror::Error;

use crate::calibration::{CalibrationError, Calibrator};
use crate::geometry::{camera_cm_to_screen_pt, screen_pt_to_cm, DeviceProfile, GeometryError};
use crate::math::Point2;

use super::{FilterError, FrameError, GazeFrame, OneEuroConfig, OneEuroFilter2};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
}

/// Both outputs of one pipeline step, in screen centimetres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineEstimate {
    /// Transformed and smoothed estimate `G_E`.
    pub uncalibrated_cm: Point2,
    /// `G_E` after the calibrator's active strategy (`G_C`).
    pub calibrated_cm: Point2,
}

/// Raw camera-plane frames in, smoothed screen-plane estimates out.
///
/// Frames are first mapped to the screen by the device transform and then smoothed,
/// so the filter runs in screen centimetres.
#[derive(Debug, Clone)]
pub struct GazePipeline {
    profile: DeviceProfile,
    filter: OneEuroFilter2,
}

impl GazePipeline {
    pub fn new(profile: DeviceProfile, filter: OneEuroConfig) -> Result<Self, PipelineError> {
        Ok(Self { profile, filter: OneEuroFilter2::new(filter)? })
    }

    pub fn profile(&self) -> &DeviceProfile {
        &self.profile
    }

    /// Forgets the filter history, e.g. when a new fixation begins.
    pub fn restart_stream(&mut self) {
        self.filter.reset();
    }

    pub fn last_timestamp(&self) -> Option<f64> {
        self.filter.last_timestamp()
    }

    /// Runs one frame through the transform, the filter and the calibrator. On error
    /// the pipeline state is left unchanged.
    pub fn estimate(&mut self, frame: &GazeFrame, calibrator: &Calibrator) -> Result<PipelineEstimate, PipelineError> {
        frame.validate()?;
        let screen_cm = screen_pt_to_cm(camera_cm_to_screen_pt(frame.raw_cm, &self.profile)?, &self.profile)?;
        self.filter.check(screen_cm, frame.timestamp_s)?;
        let mut next = self.filter.clone();
        let g_e = next.step(screen_cm, frame.timestamp_s)?;
        let g_c = calibrator.correct(g_e, frame.head_pose)?;
        self.filter = next;
        Ok(PipelineEstimate { uncalibrated_cm: g_e, calibrated_cm: g_c })
    }
}
