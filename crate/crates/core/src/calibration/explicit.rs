use crate::geometry::{screen_pt_to_cm, DeviceProfile};
use crate::math::{Point2, Vec3};

use super::{CalibrationError, CalibrationSample, SampleStore};

pub const EXPLICIT_POINTS: usize = 9;

/// The 3×3 fixation grid at 1/6, 1/2 and 5/6 of the screen width and height (pt),
/// row-major from the top-left.
pub fn explicit_grid_pt(profile: &DeviceProfile) -> Vec<Point2> {
    let size = profile.screen_size_pt();
    let fractions = [1.0 / 6.0, 0.5, 5.0 / 6.0];
    fractions
        .iter()
        .flat_map(|fy| fractions.iter().map(move |fx| Point2::new(size.x * fx, size.y * fy)))
        .collect()
}

/// Builds the frozen store used by explicit calibration from nine fixations.
///
/// `targets_pt` must be the grid of [`explicit_grid_pt`] (in any order);
/// `observed_cm` holds the uncalibrated screen-cm estimate recorded for each target.
pub fn build_explicit_calibration(
    profile: &DeviceProfile,
    targets_pt: &[Point2],
    observed_cm: &[Point2],
    poses: &[Option<Vec3>],
) -> Result<SampleStore, CalibrationError> {
    for len in [targets_pt.len(), observed_cm.len(), poses.len()] {
        if len != EXPLICIT_POINTS {
            return Err(CalibrationError::WrongPointCount { expected: EXPLICIT_POINTS, got: len });
        }
    }
    let grid = explicit_grid_pt(profile);
    let mut store = SampleStore::new();
    for (i, ((&target, &observed), &pose)) in targets_pt.iter().zip(observed_cm).zip(poses).enumerate() {
        if !grid.iter().any(|g| g.distance(target) < 1e-6) {
            return Err(CalibrationError::OffGrid { index: i });
        }
        let gt = screen_pt_to_cm(target, profile).map_err(|_| CalibrationError::OffGrid { index: i })?;
        store.record(CalibrationSample::new(observed, gt, pose, 0.0, i as u64))?;
    }
    store.freeze();
    Ok(store)
}
