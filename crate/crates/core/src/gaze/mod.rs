//! Gaze frames, smoothing, the synthetic gaze source and the estimation pipeline.

mod frame;
mod one_euro;
mod pipeline;
mod synthetic;

pub use frame::{read_frame_log, write_frame_log, FrameError, GazeFrame};
pub use one_euro::{FilterError, OneEuroConfig, OneEuroFilter, OneEuroFilter2};
pub use pipeline::{GazePipeline, PipelineError, PipelineEstimate};
pub use synthetic::{pose_relax, pose_walk_step, synthetic_frame, SyntheticConfigError, SyntheticGazeConfig};
