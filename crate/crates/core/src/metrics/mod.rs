//! Trial records, descriptive summaries, error-over-interactions series and CSV I/O.

mod csv_io;
mod summary;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::Point2;

pub use csv_io::{export_csv, import_csv, read_csv, write_csv, CSV_HEADER};
pub use summary::{bootstrap_mean_ci, summarize, window_series_by_group, GroupSummary, MetricSummary, SummaryStats, WindowSeries};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("window {window} is longer than the series ({len})")]
    WindowTooLong { window: usize, len: usize },
    #[error("window and step must be positive")]
    ZeroWindow,
    #[error("cannot summarize an empty record set")]
    Empty,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv row {row}: {reason}")]
    BadRow { row: usize, reason: String },
    #[error("unexpected csv header {0:?}")]
    BadHeader(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Objective metrics of one selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_idx: u32,
    pub seed: u64,
    pub device: String,
    pub strategy: String,
    pub technique: String,
    pub gaze_error_cm: f64,
    pub thumb_distance_cm: f64,
    pub completion_time_s: f64,
    pub success: bool,
    pub gesture: String,
    pub timestamp_s: f64,
}

/// Distance between the gaze estimate and the release point, in cm.
pub fn gaze_error(calibrated_gaze_cm: Point2, release_pos_cm: Point2) -> f64 {
    calibrated_gaze_cm.distance(release_pos_cm)
}

/// Means over windows of `window` consecutive values advanced by `step`. Each point is
/// `(centre index, mean)`; there are `floor((n − window) / step) + 1` points.
pub fn sliding_window_error(values: &[f64], window: usize, step: usize) -> Result<Vec<(f64, f64)>, MetricsError> {
    if window == 0 || step == 0 {
        return Err(MetricsError::ZeroWindow);
    }
    if window > values.len() {
        return Err(MetricsError::WindowTooLong { window, len: values.len() });
    }
    Ok((0..=(values.len() - window) / step)
        .map(|k| {
            let start = k * step;
            let mean = values[start..start + window].iter().sum::<f64>() / window as f64;
            (start as f64 + (window as f64 - 1.0) / 2.0, mean)
        })
        .collect())
}
