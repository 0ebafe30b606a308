use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::{stream, Stream};

use super::{sliding_window_error, MetricsError, TrialRecord};

pub const BOOTSTRAP_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator; 0 for a single value).
    pub sd: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub strategy: String,
    pub device: String,
    pub technique: String,
    pub count: usize,
    pub gaze_error_cm: MetricSummary,
    pub thumb_distance_cm: MetricSummary,
    pub completion_time_s: MetricSummary,
    pub success_rate: MetricSummary,
}

/// Per-(strategy, device) summaries, in sorted key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub groups: Vec<GroupSummary>,
}

impl SummaryStats {
    pub fn group(&self, strategy: &str, device: &str) -> Option<&GroupSummary> {
        self.groups.iter().find(|g| g.strategy == strategy && g.device == device)
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_sd(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Percentile bootstrap 95% interval of the mean, widened if needed so that it
/// contains the sample mean.
pub fn bootstrap_mean_ci<R: Rng + ?Sized>(values: &[f64], resamples: usize, rng: &mut R) -> (f64, f64) {
    let m = mean(values);
    if values.len() < 2 || resamples == 0 {
        return (m, m);
    }
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..values.len()).map(|_| values[rng.random_range(0..values.len())]).sum::<f64>() / values.len() as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    (quantile(&means, 0.025).min(m), quantile(&means, 0.975).max(m))
}

fn metric<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> MetricSummary {
    let (lo, hi) = bootstrap_mean_ci(values, BOOTSTRAP_RESAMPLES, rng);
    MetricSummary { mean: mean(values), sd: sample_sd(values), ci95_low: lo, ci95_high: hi }
}

/// Groups by (strategy, device) and summarizes every metric. Bootstrap draws come from
/// a stream keyed by `seed`, so the output is deterministic.
pub fn summarize(records: &[TrialRecord], seed: u64) -> Result<SummaryStats, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut groups: BTreeMap<(&str, &str), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.strategy.as_str(), r.device.as_str())).or_default().push(r);
    }
    let mut rng = stream(seed, Stream::Bootstrap);
    let groups = groups
        .into_iter()
        .map(|((strategy, device), rs)| {
            let col = |f: fn(&TrialRecord) -> f64| rs.iter().map(|r| f(r)).collect::<Vec<f64>>();
            let technique = if rs.iter().all(|r| r.technique == rs[0].technique) {
                rs[0].technique.clone()
            } else {
                "mixed".to_string()
            };
            GroupSummary {
                strategy: strategy.to_string(),
                device: device.to_string(),
                technique,
                count: rs.len(),
                gaze_error_cm: metric(&col(|r| r.gaze_error_cm), &mut rng),
                thumb_distance_cm: metric(&col(|r| r.thumb_distance_cm), &mut rng),
                completion_time_s: metric(&col(|r| r.completion_time_s), &mut rng),
                success_rate: metric(&col(|r| if r.success { 1.0 } else { 0.0 }), &mut rng),
            }
        })
        .collect();
    Ok(SummaryStats { groups })
}

/// Sliding-window gaze-error series for one (strategy, device) group: computed per
/// seed in trial order, then averaged pointwise across seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSeries {
    pub strategy: String,
    pub device: String,
    pub seeds: usize,
    pub points: Vec<(f64, f64)>,
}

pub fn window_series_by_group(
    records: &[TrialRecord],
    window: usize,
    step: usize,
) -> Result<Vec<WindowSeries>, MetricsError> {
    let mut runs: BTreeMap<(&str, &str), BTreeMap<u64, Vec<&TrialRecord>>> = BTreeMap::new();
    for r in records {
        runs.entry((&r.strategy, &r.device)).or_default().entry(r.seed).or_default().push(r);
    }
    let mut out = Vec::new();
    for ((strategy, device), by_seed) in runs {
        let mut series: Vec<Vec<(f64, f64)>> = Vec::new();
        for mut rs in by_seed.into_values() {
            rs.sort_by_key(|r| r.trial_idx);
            let errors: Vec<f64> = rs.iter().map(|r| r.gaze_error_cm).collect();
            series.push(sliding_window_error(&errors, window, step)?);
        }
        let len = series.iter().map(Vec::len).min().unwrap_or(0);
        let points = (0..len)
            .map(|k| (series[0][k].0, series.iter().map(|s| s[k].1).sum::<f64>() / series.len() as f64))
            .collect();
        out.push(WindowSeries { strategy: strategy.to_string(), device: device.to_string(), seeds: series.len(), points });
    }
    Ok(out)
}
