//! Device profiles, unit conversions and the camera-plane to screen transform.
//!
//! Coordinate frames used throughout the crate:
//!
//! - **camera plane (cm)**: origin at the front camera, x toward the screen's right
//!   edge, y toward the screen's bottom edge. Gaze estimators emit this frame.
//! - **screen (cm)**: origin at the top-left corner of the portrait screen, x right,
//!   y down. Metrics and calibration work here.
//! - **screen (pt)**: the same origin and axes in logical points. Layout, snapping and
//!   touch input work here.
//!
//! None of the transforms clamp to the screen rectangle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::Point2;

pub const CM_PER_INCH: f64 = 2.54;

/// Relative tolerance for the diagonal and aspect-ratio consistency checks.
const CONSISTENCY_TOLERANCE: f64 = 0.005;
/// The camera may sit at most this far below the top edge of the screen.
const CAMERA_MAX_Y_CM: f64 = 0.5;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("invalid profile {name:?}: {reason}")]
    InvalidProfile { name: String, reason: String },
    #[error("unknown device profile {0:?}")]
    UnknownProfile(String),
}

/// Physical and logical geometry of one device screen plus its camera position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    pub name: String,
    pub screen_px: (u32, u32),
    pub screen_pt: (u32, u32),
    pub diagonal_cm: f64,
    pub physical_cm: Point2,
    /// Camera position in the screen frame (cm).
    pub camera_offset_cm: Point2,
}

impl DeviceProfile {
    /// Builds a profile whose physical extent follows from the diagonal and the pixel
    /// aspect ratio, with the camera at the top centre of the portrait screen.
    pub fn from_diagonal(
        name: &str,
        screen_px: (u32, u32),
        screen_pt: (u32, u32),
        diagonal_in: f64,
    ) -> Self {
        let diagonal_cm = diagonal_in * CM_PER_INCH;
        let aspect = f64::from(screen_px.1) / f64::from(screen_px.0);
        let width = diagonal_cm / (1.0 + aspect * aspect).sqrt();
        let physical_cm = Point2::new(width, width * aspect);
        Self {
            name: name.to_string(),
            screen_px,
            screen_pt,
            diagonal_cm,
            physical_cm,
            camera_offset_cm: Point2::new(width / 2.0, 0.0),
        }
    }

    pub fn phone() -> Self {
        Self::from_diagonal("phone", (1440, 3200), (1080, 2268), 6.67)
    }

    /// The tablet point grid is the pixel grid scaled by 2/3.
    pub fn tablet() -> Self {
        Self::from_diagonal("tablet", (1800, 2880), (1200, 1920), 11.0)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let fail = |reason: String| GeometryError::InvalidProfile { name: self.name.clone(), reason };
        let (pxw, pxh) = self.screen_px;
        let (ptw, pth) = self.screen_pt;
        if pxw == 0 || pxh == 0 || ptw == 0 || pth == 0 {
            return Err(fail("screen grids must be non-empty".into()));
        }
        let Point2 { x: w, y: h } = self.physical_cm;
        if !(w > 0.0 && h > 0.0 && self.diagonal_cm > 0.0) || !w.is_finite() || !h.is_finite() {
            return Err(fail("physical dimensions must be strictly positive".into()));
        }
        let diag = w.hypot(h);
        if ((diag - self.diagonal_cm) / self.diagonal_cm).abs() > CONSISTENCY_TOLERANCE {
            return Err(fail(format!(
                "physical diagonal {diag:.3} cm disagrees with {:.3} cm",
                self.diagonal_cm
            )));
        }
        let px_aspect = f64::from(pxh) / f64::from(pxw);
        if ((h / w - px_aspect) / px_aspect).abs() > CONSISTENCY_TOLERANCE {
            return Err(fail("physical aspect ratio disagrees with the pixel grid".into()));
        }
        if !self.camera_offset_cm.is_finite() || self.camera_offset_cm.y > CAMERA_MAX_Y_CM {
            return Err(fail("camera must sit on or above the screen".into()));
        }
        Ok(())
    }

    /// Points per centimetre along x and y. The two differ when the point grid does
    /// not share the physical aspect ratio (the phone's 1080×2268 grid does not).
    pub fn pt_per_cm(&self) -> Point2 {
        Point2::new(
            f64::from(self.screen_pt.0) / self.physical_cm.x,
            f64::from(self.screen_pt.1) / self.physical_cm.y,
        )
    }

    pub fn screen_size_pt(&self) -> Point2 {
        Point2::new(f64::from(self.screen_pt.0), f64::from(self.screen_pt.1))
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profiles always serialize")
    }
}

/// The two devices used in the user studies.
pub fn builtin_profiles() -> Vec<DeviceProfile> {
    vec![DeviceProfile::phone(), DeviceProfile::tablet()]
}

pub fn profile_by_name(name: &str) -> Result<DeviceProfile, GeometryError> {
    builtin_profiles()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| GeometryError::UnknownProfile(name.to_string()))
}

fn check_finite(p: Point2) -> Result<(), GeometryError> {
    if p.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::NonFinite { x: p.x, y: p.y })
    }
}

/// The transform T: camera-plane centimetres to screen points.
pub fn camera_cm_to_screen_pt(p: Point2, profile: &DeviceProfile) -> Result<Point2, GeometryError> {
    check_finite(p)?;
    let scale = profile.pt_per_cm();
    let screen_cm = p + profile.camera_offset_cm;
    Ok(Point2::new(screen_cm.x * scale.x, screen_cm.y * scale.y))
}

pub fn screen_pt_to_cm(p: Point2, profile: &DeviceProfile) -> Result<Point2, GeometryError> {
    check_finite(p)?;
    let scale = profile.pt_per_cm();
    Ok(Point2::new(p.x / scale.x, p.y / scale.y))
}

pub fn screen_cm_to_pt(p: Point2, profile: &DeviceProfile) -> Result<Point2, GeometryError> {
    check_finite(p)?;
    let scale = profile.pt_per_cm();
    Ok(Point2::new(p.x * scale.x, p.y * scale.y))
}

/// Screen centimetres to the camera plane (subtracts the camera offset).
pub fn screen_cm_to_camera_cm(p: Point2, profile: &DeviceProfile) -> Point2 {
    p - profile.camera_offset_cm
}

pub fn camera_cm_to_screen_cm(p: Point2, profile: &DeviceProfile) -> Point2 {
    p + profile.camera_offset_cm
}
