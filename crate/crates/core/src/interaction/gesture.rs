use serde::{Deserialize, Serialize};

use crate::geometry::{screen_pt_to_cm, DeviceProfile};
use crate::math::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gesture {
    DragRelease,
    TapOnly,
    Scroll,
    ShortTapAtFinger,
}

impl Gesture {
    pub fn as_str(self) -> &'static str {
        match self {
            Gesture::DragRelease => "DragRelease",
            Gesture::TapOnly => "TapOnly",
            Gesture::Scroll => "Scroll",
            Gesture::ShortTapAtFinger => "ShortTapAtFinger",
        }
    }

    /// Whether the gesture confirms a cursor selection.
    pub fn selects(self) -> bool {
        matches!(self, Gesture::DragRelease | Gesture::TapOnly)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GestureConfig {
    pub tap_max_travel_cm: f64,
    pub tap_max_duration_s: f64,
    pub double_tap_window_s: f64,
    pub double_tap_radius_cm: f64,
    /// Minimum scroll path length as a fraction of the screen height.
    pub scroll_min_height_fraction: f64,
    pub scroll_min_speed_cm_s: f64,
}

impl Default for GestureConfig {
    fn default() -> Self {
        Self {
            tap_max_travel_cm: 0.2,
            tap_max_duration_s: 0.3,
            double_tap_window_s: 0.35,
            double_tap_radius_cm: 0.5,
            scroll_min_height_fraction: 0.25,
            scroll_min_speed_cm_s: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TouchPoint {
    pub t: f64,
    pub pos_pt: Point2,
}

/// A completed tap, remembered so the next one can be recognised as a double tap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapMemory {
    pub released_t: f64,
    pub pos_pt: Point2,
}

/// Length of the touch polyline in screen centimetres.
pub fn path_length_cm(path: &[TouchPoint], profile: &DeviceProfile) -> f64 {
    let scale = profile.pt_per_cm();
    path.windows(2)
        .map(|w| {
            let d = w[1].pos_pt - w[0].pos_pt;
            Point2::new(d.x / scale.x, d.y / scale.y).norm()
        })
        .sum()
}

fn pt_distance_cm(a: Point2, b: Point2, profile: &DeviceProfile) -> f64 {
    let a = screen_pt_to_cm(a, profile).unwrap_or(a);
    let b = screen_pt_to_cm(b, profile).unwrap_or(b);
    a.distance(b)
}

/// Classifies a finished touch. A tap is a short, nearly stationary touch (travel is
/// measured along the path); a tap that follows another within the double-tap window
/// and radius becomes `ShortTapAtFinger`. Long fast swipes are scrolls.
pub fn classify_gesture(
    path: &[TouchPoint],
    profile: &DeviceProfile,
    cfg: &GestureConfig,
    previous_tap: Option<TapMemory>,
) -> Gesture {
    let (Some(first), Some(last)) = (path.first(), path.last()) else {
        return Gesture::TapOnly;
    };
    let length = path_length_cm(path, profile);
    let duration = last.t - first.t;
    if length < cfg.tap_max_travel_cm && duration < cfg.tap_max_duration_s {
        let is_double = previous_tap.is_some_and(|prev| {
            first.t - prev.released_t <= cfg.double_tap_window_s
                && pt_distance_cm(prev.pos_pt, first.pos_pt, profile) <= cfg.double_tap_radius_cm
        });
        return if is_double { Gesture::ShortTapAtFinger } else { Gesture::TapOnly };
    }
    let speed = if duration > 0.0 { length / duration } else { f64::INFINITY };
    if length > cfg.scroll_min_height_fraction * profile.physical_cm.y && speed > cfg.scroll_min_speed_cm_s {
        return Gesture::Scroll;
    }
    Gesture::DragRelease
}
