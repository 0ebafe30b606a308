use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::{Point2, Vec3};

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("frame at t={0} has non-finite coordinates")]
    NonFinite(f64),
    #[error("frame at t={0} has a head pose that is not a unit vector")]
    UnnormalizedPose(f64),
    #[error("frame timestamp {t} does not follow {prev}")]
    NonMonotone { t: f64, prev: f64 },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One raw gaze estimate in camera-plane centimetres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GazeFrame {
    #[serde(rename = "t")]
    pub timestamp_s: f64,
    pub raw_cm: Point2,
    pub head_pose: Option<Vec3>,
}

impl GazeFrame {
    pub fn validate(&self) -> Result<(), FrameError> {
        if !self.timestamp_s.is_finite() || !self.raw_cm.is_finite() {
            return Err(FrameError::NonFinite(self.timestamp_s));
        }
        if let Some(h) = self.head_pose {
            if !h.is_unit() {
                return Err(FrameError::UnnormalizedPose(self.timestamp_s));
            }
        }
        Ok(())
    }
}

/// Writes frames as JSON lines.
pub fn write_frame_log<W: Write>(mut w: W, frames: &[GazeFrame]) -> Result<(), FrameError> {
    for f in frames {
        serde_json::to_writer(&mut w, f).map_err(|e| FrameError::Io(e.into()))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a JSON-lines frame log, validating every frame and the timestamp order.
/// Blank lines are skipped.
pub fn read_frame_log<R: BufRead>(r: R) -> Result<Vec<GazeFrame>, FrameError> {
    let mut frames: Vec<GazeFrame> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let frame: GazeFrame =
            serde_json::from_str(&line).map_err(|source| FrameError::Parse { line: i + 1, source })?;
        frame.validate()?;
        if let Some(prev) = frames.last() {
            if frame.timestamp_s <= prev.timestamp_s {
                return Err(FrameError::NonMonotone { t: frame.timestamp_s, prev: prev.timestamp_s });
            }
        }
        frames.push(frame);
    }
    Ok(frames)
}
