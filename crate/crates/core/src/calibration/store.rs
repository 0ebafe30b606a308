use std::collections::VecDeque;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::math::{Point2, Vec3};

use super::CalibrationError;

/// A paired raw estimate and ground-truth point harvested from one interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSample {
    /// Uncalibrated estimate `G_E` (screen cm) at the moment the cursor was locked.
    pub g_est_cm: Point2,
    /// Cursor position at thumb release (screen cm).
    pub g_gt_cm: Point2,
    pub head_pose: Option<Vec3>,
    pub timestamp_s: f64,
    pub trial_id: u64,
}

impl CalibrationSample {
    pub fn new(g_est_cm: Point2, g_gt_cm: Point2, head_pose: Option<Vec3>, timestamp_s: f64, trial_id: u64) -> Self {
        Self { g_est_cm, g_gt_cm, head_pose, timestamp_s, trial_id }
    }

    /// `dG = G_gt − G_E`.
    pub fn offset(&self) -> Point2 {
        self.g_gt_cm - self.g_est_cm
    }

    pub fn validate(&self) -> Result<(), CalibrationError> {
        if !self.g_est_cm.is_finite() || !self.g_gt_cm.is_finite() || !self.timestamp_s.is_finite() {
            return Err(CalibrationError::InvalidSample("non-finite coordinate or timestamp"));
        }
        if let Some(h) = self.head_pose {
            if !h.is_unit() {
                return Err(CalibrationError::InvalidSample("head pose is not a unit vector"));
            }
        }
        Ok(())
    }
}

/// Insertion-ordered sample history with optional FIFO capacity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleStore {
    samples: VecDeque<CalibrationSample>,
    capacity: Option<usize>,
    frozen: bool,
}

impl SampleStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity_limit(capacity: usize) -> Self {
        Self { capacity: Some(capacity.max(1)), ..Self::default() }
    }

    pub fn from_samples(samples: impl IntoIterator<Item = CalibrationSample>) -> Result<Self, CalibrationError> {
        let mut store = Self::new();
        for s in samples {
            store.record(s)?;
        }
        Ok(store)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &CalibrationSample> + Clone {
        self.samples.iter()
    }

    pub fn last(&self) -> Option<&CalibrationSample> {
        self.samples.back()
    }

    /// Appends a sample, returning the evicted oldest sample if the capacity was hit.
    pub fn record(&mut self, sample: CalibrationSample) -> Result<Option<CalibrationSample>, CalibrationError> {
        if self.frozen {
            return Err(CalibrationError::FrozenStore);
        }
        sample.validate()?;
        self.samples.push_back(sample);
        match self.capacity {
            Some(cap) if self.samples.len() > cap => Ok(self.samples.pop_front()),
            _ => Ok(None),
        }
    }

    /// Removes every sample. Frozen stores stay frozen and keep their samples.
    pub fn clear(&mut self) -> Result<(), CalibrationError> {
        if self.frozen {
            return Err(CalibrationError::FrozenStore);
        }
        self.samples.clear();
        Ok(())
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<(), CalibrationError> {
        for s in &self.samples {
            serde_json::to_writer(&mut w, s).map_err(|e| CalibrationError::Io(e.into()))?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self, CalibrationError> {
        let mut store = Self::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let s: CalibrationSample =
                serde_json::from_str(&line).map_err(|source| CalibrationError::Parse { line: i + 1, source })?;
            store.record(s)?;
        }
        Ok(store)
    }
}
