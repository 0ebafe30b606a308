//! Interaction engine for gaze-and-swipe target selection on handheld touchscreens.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: device profiles and the camera-plane to screen transform.
//! - [`gaze`]: gaze frames, one-euro smoothing, the synthetic gaze source and the
//!   estimation pipeline.
//! - [`calibration`]: calibration samples and the NC / EC / AC1 / AC2 strategies.
//! - [`interaction`]: target layouts, cursor snapping, gesture classification and the
//!   GazeSwipe / Pure Cursor state machines.
//! - [`simulation`]: synthetic users and the seeded experiment harness.
//! - [`metrics`]: trial records, summaries, sliding-window series and CSV export.

pub mod calibration;
pub mod gaze;
pub mod geometry;
pub mod interaction;
pub mod math;
pub mod metrics;
pub mod rng;
pub mod simulation;

pub use calibration::{
    CalibrationSample, Calibrator, CalibratorConfig, SampleStore, Strategy, WeightingMode,
};
pub use gaze::{GazeFrame, GazePipeline, OneEuroConfig, OneEuroFilter, SyntheticGazeConfig};
pub use geometry::{builtin_profiles, DeviceProfile};
pub use interaction::{
    CursorState, Element, GazeSwipe, Gesture, InteractionEvent, Phase, PureCursor,
    SelectionOutcome, TargetLayout,
};
pub use math::{Point2, Vec3};
pub use metrics::{SummaryStats, TrialRecord};
pub use simulation::{ExperimentConfig, SimulatedUser, Technique};
