//! Calibration samples, the sample store and the four calibration strategies.

mod explicit;
mod store;
mod strategy;

use thiserror::Error;

use crate::math::{Point2, Vec3};

pub use explicit::{build_explicit_calibration, explicit_grid_pt, EXPLICIT_POINTS};
pub use store::{CalibrationSample, SampleStore};
pub use strategy::{
    calibrate_ac1, calibrate_ac2, inverse_distance_weights, pose_similarity, CalibratorConfig, Strategy,
    WeightingMode,
};

#[derive(Debug, Error)]
pub enum CalibrationError {
    #[error("invalid calibration sample: {0}")]
    InvalidSample(&'static str),
    #[error("query head pose is not a unit vector")]
    UnnormalizedPose,
    #[error("the calibration store is frozen")]
    FrozenStore,
    #[error("explicit calibration needs {expected} points, got {got}")]
    WrongPointCount { expected: usize, got: usize },
    #[error("explicit calibration point {index} is not on the 3x3 grid")]
    OffGrid { index: usize },
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("invalid calibrator config: {0}")]
    InvalidConfig(&'static str),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A strategy together with the sample store it reads.
#[derive(Debug, Clone)]
pub struct Calibrator {
    cfg: CalibratorConfig,
    store: SampleStore,
}

impl Calibrator {
    pub fn new(cfg: CalibratorConfig) -> Self {
        Self { cfg, store: SampleStore::new() }
    }

    pub fn with_store(cfg: CalibratorConfig, store: SampleStore) -> Self {
        Self { cfg, store }
    }

    pub fn config(&self) -> &CalibratorConfig {
        &self.cfg
    }

    pub fn strategy(&self) -> Strategy {
        self.cfg.strategy
    }

    pub fn store(&self) -> &SampleStore {
        &self.store
    }

    /// Switches strategy and starts from an empty, unfrozen store.
    pub fn reset(&mut self, strategy: Strategy) {
        self.cfg.strategy = strategy;
        self.store = SampleStore::new();
    }

    /// Installs a (typically frozen) explicit-calibration store.
    pub fn install_store(&mut self, store: SampleStore) {
        self.store = store;
    }

    /// Calibrated estimate `G_C` for the uncalibrated `g_est`.
    pub fn correct(&self, g_est: Point2, head_pose: Option<Vec3>) -> Result<Point2, CalibrationError> {
        match self.cfg.strategy {
            Strategy::Nc => Ok(g_est),
            Strategy::Ec | Strategy::Ac1 => Ok(calibrate_ac1(&self.store, g_est, &self.cfg)),
            Strategy::Ac2 => calibrate_ac2(&self.store, g_est, head_pose, &self.cfg),
        }
    }

    pub fn record(&mut self, sample: CalibrationSample) -> Result<Option<CalibrationSample>, CalibrationError> {
        self.store.record(sample)
    }
}
