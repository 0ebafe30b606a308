use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::math::{Point2, Vec3};

use super::{CalibrationError, SampleStore};

/// How a calibrated estimate is derived from the raw one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    /// No calibration.
    #[serde(rename = "NC")]
    Nc,
    /// Explicit nine-point calibration collected before use, then frozen.
    #[serde(rename = "EC")]
    Ec,
    /// Auto-calibration from interaction samples, inverse-distance weighted.
    #[serde(rename = "AC1")]
    Ac1,
    /// As AC1, with each sample further weighted by head-pose similarity.
    #[serde(rename = "AC2")]
    Ac2,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Nc, Strategy::Ec, Strategy::Ac1, Strategy::Ac2];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Nc => "NC",
            Strategy::Ec => "EC",
            Strategy::Ac1 => "AC1",
            Strategy::Ac2 => "AC2",
        }
    }

    /// Whether interaction samples are fed back into the store.
    pub fn learns_from_interactions(self) -> bool {
        matches!(self, Strategy::Ac1 | Strategy::Ac2)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = CalibrationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| CalibrationError::UnknownStrategy(s.to_string()))
    }
}

/// Which distance the inverse-distance weights are built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightingMode {
    /// `‖G_gt,i − G_E,i‖`: each sample's own offset magnitude.
    #[default]
    OffsetMagnitude,
    /// `‖g_est − G_E,i‖`: distance from the query to the sample's estimate.
    EstimateDistance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibratorConfig {
    pub epsilon_cm: f64,
    pub weighting_mode: WeightingMode,
    pub clamp_negative_cosine: bool,
    pub strategy: Strategy,
}

impl Default for CalibratorConfig {
    fn default() -> Self {
        Self {
            epsilon_cm: 0.05,
            weighting_mode: WeightingMode::OffsetMagnitude,
            clamp_negative_cosine: true,
            strategy: Strategy::Nc,
        }
    }
}

impl CalibratorConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        Self { strategy, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), CalibrationError> {
        if !(self.epsilon_cm > 0.0 && self.epsilon_cm.is_finite()) {
            return Err(CalibrationError::InvalidConfig("epsilon_cm must be positive"));
        }
        Ok(())
    }
}

/// Normalized inverse-distance weights `λ_i`, in store order.
pub fn inverse_distance_weights(store: &SampleStore, g_est: Point2, cfg: &CalibratorConfig) -> Vec<f64> {
    let inv: Vec<f64> = store
        .iter()
        .map(|s| {
            let d = match cfg.weighting_mode {
                WeightingMode::OffsetMagnitude => s.offset().norm(),
                WeightingMode::EstimateDistance => g_est.distance(s.g_est_cm),
            };
            1.0 / d.max(cfg.epsilon_cm)
        })
        .collect();
    let total: f64 = inv.iter().sum();
    inv.into_iter().map(|w| w / total).collect()
}

/// `G_C = G_E + Σ λ_i dG_i`. An empty store returns `g_est` unchanged.
pub fn calibrate_ac1(store: &SampleStore, g_est: Point2, cfg: &CalibratorConfig) -> Point2 {
    let weights = inverse_distance_weights(store, g_est, cfg);
    let correction = store
        .iter()
        .zip(&weights)
        .fold(Point2::ZERO, |acc, (s, &l)| acc + s.offset() * l);
    g_est + correction
}

/// Head-pose similarity `h_i` between the query pose and a sample's pose.
pub fn pose_similarity(query: Option<Vec3>, sample: Option<Vec3>, clamp_negative_cosine: bool) -> f64 {
    match (query, sample) {
        (Some(q), Some(s)) => {
            let c = q.dot(s);
            if clamp_negative_cosine {
                c.clamp(0.0, 1.0)
            } else {
                c
            }
        }
        _ => 1.0,
    }
}

/// `G_C = G_E + Σ λ_i h_i dG_i`, with `λ` normalized on its own (the `h_i` are not
/// renormalized). Samples without a head pose, or a query without one, use `h = 1`.
pub fn calibrate_ac2(
    store: &SampleStore,
    g_est: Point2,
    head_pose: Option<Vec3>,
    cfg: &CalibratorConfig,
) -> Result<Point2, CalibrationError> {
    if let Some(h) = head_pose {
        if !h.is_unit() {
            return Err(CalibrationError::UnnormalizedPose);
        }
    }
    let weights = inverse_distance_weights(store, g_est, cfg);
    let correction = store.iter().zip(&weights).fold(Point2::ZERO, |acc, (s, &l)| {
        acc + s.offset() * (l * pose_similarity(head_pose, s.head_pose, cfg.clamp_negative_cosine))
    });
    Ok(g_est + correction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::CalibrationSample;

    fn two_sample_store(h1: Option<Vec3>, h2: Option<Vec3>) -> SampleStore {
        SampleStore::from_samples([
            CalibrationSample::new(Point2::new(1.0, 1.0), Point2::new(2.0, 1.0), h1, 0.0, 0),
            CalibrationSample::new(Point2::new(5.0, 5.0), Point2::new(5.0, 7.0), h2, 1.0, 1),
        ])
        .unwrap()
    }

    fn cfg() -> CalibratorConfig {
        CalibratorConfig::with_strategy(Strategy::Ac1)
    }

    #[test]
    fn empty_store_is_identity() {
        let q = Point2::new(3.0, 3.0);
        assert_eq!(calibrate_ac1(&SampleStore::new(), q, &cfg()), q);
        assert_eq!(calibrate_ac2(&SampleStore::new(), q, Some(Vec3::Z), &cfg()).unwrap(), q);
    }

    #[test]
    fn single_sample_adds_its_offset() {
        let s = SampleStore::from_samples([CalibrationSample::new(
            Point2::new(9.0, 2.0),
            Point2::new(9.7, 1.8),
            None,
            0.0,
            0,
        )])
        .unwrap();
        let q = Point2::new(3.0, 3.0);
        let out = calibrate_ac1(&s, q, &cfg());
        assert_eq!(out, q + s.last().unwrap().offset());
        assert!((out.x - 3.7).abs() < 1e-12 && (out.y - 2.8).abs() < 1e-12);
    }

    #[test]
    fn two_sample_hand_example() {
        let out = calibrate_ac1(&two_sample_store(None, None), Point2::new(3.0, 3.0), &cfg());
        assert!((out.x - (3.0 + 2.0 / 3.0)).abs() < 1e-12);
        assert!((out.y - (3.0 + 2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn two_sample_pose_weighted_hand_example() {
        // h1 = 1, h2 = 0.8
        let q = Vec3::Z;
        let s2 = Vec3::new(0.6, 0.0, 0.8);
        let out = calibrate_ac2(&two_sample_store(Some(q), Some(s2)), Point2::new(3.0, 3.0), Some(q), &cfg()).unwrap();
        assert!((out.x - (3.0 + 2.0 / 3.0)).abs() < 1e-12);
        assert!((out.y - (3.0 + 0.8 * 2.0 / 3.0)).abs() < 1e-12, "{}", out.y);
    }

    #[test]
    fn orthogonal_pose_contributes_nothing() {
        let s = SampleStore::from_samples([CalibrationSample::new(
            Point2::ZERO,
            Point2::new(1.0, 1.0),
            Some(Vec3::new(1.0, 0.0, 0.0)),
            0.0,
            0,
        )])
        .unwrap();
        let q = Point2::new(2.0, 2.0);
        assert_eq!(calibrate_ac2(&s, q, Some(Vec3::Z), &cfg()).unwrap(), q);
    }

    #[test]
    fn opposing_pose_is_clamped_unless_disabled() {
        let s = SampleStore::from_samples([CalibrationSample::new(
            Point2::ZERO,
            Point2::new(1.0, 0.0),
            Some(Vec3::new(0.0, 0.0, -1.0)),
            0.0,
            0,
        )])
        .unwrap();
        let q = Point2::ZERO;
        assert_eq!(calibrate_ac2(&s, q, Some(Vec3::Z), &cfg()).unwrap(), q);
        let raw = CalibratorConfig { clamp_negative_cosine: false, ..cfg() };
        assert_eq!(calibrate_ac2(&s, q, Some(Vec3::Z), &raw).unwrap(), Point2::new(-1.0, 0.0));
    }

    #[test]
    fn unnormalized_query_pose_is_an_error() {
        let r = calibrate_ac2(&SampleStore::new(), Point2::ZERO, Some(Vec3::new(0.0, 0.0, 1.5)), &cfg());
        assert!(matches!(r, Err(CalibrationError::UnnormalizedPose)));
    }

    #[test]
    fn estimate_distance_mode_prefers_nearby_samples() {
        let c = CalibratorConfig { weighting_mode: WeightingMode::EstimateDistance, ..cfg() };
        let near = calibrate_ac1(&two_sample_store(None, None), Point2::new(1.0, 1.0), &c);
        // the query coincides with sample 1 (distance floored at epsilon), so it dominates
        assert!((near.x - 2.0).abs() < 0.05 && (near.y - 1.0).abs() < 0.1);
    }

    #[test]
    fn perfect_sample_is_floored_not_singular() {
        let s = SampleStore::from_samples([
            CalibrationSample::new(Point2::ZERO, Point2::ZERO, None, 0.0, 0),
            CalibrationSample::new(Point2::ZERO, Point2::new(1.0, 0.0), None, 0.0, 1),
        ])
        .unwrap();
        let out = calibrate_ac1(&s, Point2::ZERO, &cfg());
        // weights 1/0.05 and 1/1 → λ2 = 1/21
        assert!((out.x - 1.0 / 21.0).abs() < 1e-12);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{s}\""));
        }
        assert!("AC3".parse::<Strategy>().is_err());
    }
}
