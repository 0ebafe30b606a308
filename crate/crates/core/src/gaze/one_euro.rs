//! One-euro filter: a low-pass filter whose cutoff rises with signal speed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::Point2;

#[derive(Debug, Error, PartialEq)]
pub enum FilterError {
    #[error("timestamp {t} is not after the previous sample at {prev}")]
    NonMonotoneTimestamp { t: f64, prev: f64 },
    #[error("non-finite filter input (value {value}, t {t})")]
    NonFinite { value: f64, t: f64 },
    #[error("invalid filter parameters: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OneEuroConfig {
    pub min_cutoff_hz: f64,
    pub beta: f64,
    pub d_cutoff_hz: f64,
}

impl Default for OneEuroConfig {
    fn default() -> Self {
        Self { min_cutoff_hz: 1.0, beta: 0.007, d_cutoff_hz: 1.0 }
    }
}

impl OneEuroConfig {
    pub fn validate(&self) -> Result<(), FilterError> {
        if !(self.min_cutoff_hz > 0.0 && self.min_cutoff_hz.is_finite()) {
            return Err(FilterError::InvalidConfig("min_cutoff_hz must be positive"));
        }
        if !(self.d_cutoff_hz > 0.0 && self.d_cutoff_hz.is_finite()) {
            return Err(FilterError::InvalidConfig("d_cutoff_hz must be positive"));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(FilterError::InvalidConfig("beta must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Memory {
    value: f64,
    derivative: f64,
    t: f64,
}

/// Scalar one-euro filter state for a single stream.
#[derive(Debug, Clone, PartialEq)]
pub struct OneEuroFilter {
    cfg: OneEuroConfig,
    memory: Option<Memory>,
}

fn smoothing_factor(te: f64, cutoff: f64) -> f64 {
    let r = 2.0 * PI * cutoff * te;
    r / (r + 1.0)
}

impl OneEuroFilter {
    pub fn new(cfg: OneEuroConfig) -> Result<Self, FilterError> {
        cfg.validate()?;
        Ok(Self { cfg, memory: None })
    }

    pub fn config(&self) -> OneEuroConfig {
        self.cfg
    }

    pub fn reset(&mut self) {
        self.memory = None;
    }

    pub fn last_timestamp(&self) -> Option<f64> {
        self.memory.map(|m| m.t)
    }

    /// Checks that `step(value, t)` would succeed without touching the state.
    pub fn check(&self, value: f64, t: f64) -> Result<(), FilterError> {
        if !value.is_finite() || !t.is_finite() {
            return Err(FilterError::NonFinite { value, t });
        }
        match self.memory {
            Some(m) if t <= m.t => Err(FilterError::NonMonotoneTimestamp { t, prev: m.t }),
            _ => Ok(()),
        }
    }

    pub fn step(&mut self, value: f64, t: f64) -> Result<f64, FilterError> {
        self.check(value, t)?;
        let Some(prev) = self.memory else {
            self.memory = Some(Memory { value, derivative: 0.0, t });
            return Ok(value);
        };
        let te = t - prev.t;
        let a_d = smoothing_factor(te, self.cfg.d_cutoff_hz);
        let dx = (value - prev.value) / te;
        let derivative = a_d * dx + (1.0 - a_d) * prev.derivative;
        let cutoff = self.cfg.min_cutoff_hz + self.cfg.beta * derivative.abs();
        let a = smoothing_factor(te, cutoff);
        let filtered = a * value + (1.0 - a) * prev.value;
        self.memory = Some(Memory { value: filtered, derivative, t });
        Ok(filtered)
    }
}

/// Independent one-euro filters on the x and y axes of a point stream.
#[derive(Debug, Clone, PartialEq)]
pub struct OneEuroFilter2 {
    x: OneEuroFilter,
    y: OneEuroFilter,
}

impl OneEuroFilter2 {
    pub fn new(cfg: OneEuroConfig) -> Result<Self, FilterError> {
        Ok(Self { x: OneEuroFilter::new(cfg)?, y: OneEuroFilter::new(cfg)? })
    }

    pub fn reset(&mut self) {
        self.x.reset();
        self.y.reset();
    }

    pub fn last_timestamp(&self) -> Option<f64> {
        self.x.last_timestamp()
    }

    pub fn check(&self, p: Point2, t: f64) -> Result<(), FilterError> {
        self.x.check(p.x, t)?;
        self.y.check(p.y, t)
    }

    /// Filters both axes; on error neither axis is updated.
    pub fn step(&mut self, p: Point2, t: f64) -> Result<Point2, FilterError> {
        self.check(p, t)?;
        Ok(Point2::new(self.x.step(p.x, t)?, self.y.step(p.y, t)?))
    }
}
