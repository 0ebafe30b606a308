use gazeswipe_core::calibration::{Calibrator, CalibratorConfig, Strategy};
use gazeswipe_core::gaze::{GazePipeline, OneEuroConfig, SyntheticGazeConfig};
use gazeswipe_core::geometry::{screen_pt_to_cm, DeviceProfile};
use gazeswipe_core::interaction::{generate_layout, Engine, GazeSwipe, GazeSwipeConfig, Gesture, Phase};
use gazeswipe_core::math::{Point2, Vec3};
use gazeswipe_core::rng::{stream, Stream};
use gazeswipe_core::simulation::{
    run_experiment, run_seed, run_trial, target_sequence, ExperimentConfig, SimulatedUser, TrialContext, TrialResult,
};

fn gaze_swipe(strategy: Strategy, snapping: bool) -> Engine {
    let profile = DeviceProfile::phone();
    let pipeline = GazePipeline::new(profile, OneEuroConfig::default()).unwrap();
    let calibrator = Calibrator::new(CalibratorConfig::with_strategy(strategy));
    let cfg = GazeSwipeConfig { snapping, ..GazeSwipeConfig::default() };
    Engine::GazeSwipe(Box::new(GazeSwipe::new(cfg, pipeline, calibrator, Phase::Hover)))
}

/// Runs `n` trials of a noiseless user against a fixed source; returns per-trial results
/// and the store size after each trial.
fn run_chain(engine: &mut Engine, source: &SyntheticGazeConfig, n: u32) -> Vec<(TrialResult, usize)> {
    run_chain_with_targets(engine, source, n).into_iter().map(|(r, s, _)| (r, s)).collect()
}

fn run_chain_with_targets(engine: &mut Engine, source: &SyntheticGazeConfig, n: u32) -> Vec<(TrialResult, usize, Point2)> {
    let profile = DeviceProfile::phone();
    let user = SimulatedUser::noiseless();
    let mut layout = generate_layout(5, &profile).unwrap();
    let targets = target_sequence(5, n, layout.elements.len());
    let mut gaze_rng = stream(5, Stream::GazeNoise);
    let mut motor_rng = stream(5, Stream::Motor);
    let mut clock = 0.0;
    let mut out = Vec::new();
    for (i, &t) in targets.iter().enumerate() {
        layout.set_target(t).unwrap();
        let ctx = TrialContext { profile: &profile, user: &user, source, pose: Vec3::Z };
        let r = run_trial(engine, &layout, &ctx, &mut clock, &mut gaze_rng, &mut motor_rng, i as u32).unwrap();
        let stored = engine.as_gaze_swipe().map_or(0, |g| g.calibrator().store().len());
        let centre = screen_pt_to_cm(layout.target().unwrap().rect_pt.center(), &profile).unwrap();
        out.push((r, stored, centre));
    }
    out
}

fn biased(bias: Point2) -> SyntheticGazeConfig {
    SyntheticGazeConfig { user_bias_cm: bias, ..SyntheticGazeConfig::perfect() }
}

#[test]
fn perfect_chain_taps_on_target() {
    let mut e = gaze_swipe(Strategy::Nc, true);
    for (r, _) in run_chain(&mut e, &SyntheticGazeConfig::perfect(), 20) {
        assert_eq!(r.gesture, Gesture::TapOnly);
        assert!(r.success);
        assert_eq!(r.thumb_distance_cm, 0.0);
        assert!(r.gaze_error_cm < 0.01, "{}", r.gaze_error_cm);
    }
}

#[test]
fn uncorrected_bias_is_dragged_off_every_trial() {
    let mut e = gaze_swipe(Strategy::Nc, false);
    let size = DeviceProfile::phone().physical_cm;
    let mut full = 0;
    for (r, stored, centre) in run_chain_with_targets(&mut e, &biased(Point2::new(2.0, 0.0)), 40) {
        // a cursor pushed past the screen edge is clamped, which shortens the drag
        if centre.x + 2.0 <= size.x {
            assert!((r.thumb_distance_cm - 2.0).abs() < 1e-6, "{}", r.thumb_distance_cm);
            full += 1;
        } else {
            assert!(r.thumb_distance_cm < 2.0);
        }
        assert!(r.success);
        assert_eq!(stored, 0);
    }
    assert!(full > 20);
}

#[test]
fn one_sample_removes_a_constant_bias() {
    for snapping in [false, true] {
        let mut e = gaze_swipe(Strategy::Ac1, snapping);
        let results = run_chain(&mut e, &biased(Point2::new(1.2, -1.6)), 20);
        assert!(results[0].0.thumb_distance_cm > 1.0);
        for (r, _) in &results[1..] {
            assert!(r.thumb_distance_cm < 0.01, "{}", r.thumb_distance_cm);
            assert_eq!(r.gesture, Gesture::TapOnly);
        }
    }
}

#[test]
fn learning_stores_grow_by_one_per_selection() {
    let source = SyntheticGazeConfig { user_bias_cm: Point2::new(1.0, 0.5), ..SyntheticGazeConfig::default() };
    for strategy in [Strategy::Ac1, Strategy::Ac2] {
        let mut e = gaze_swipe(strategy, true);
        for (i, (_, stored)) in run_chain(&mut e, &source, 30).into_iter().enumerate() {
            assert_eq!(stored, i + 1);
        }
    }
}

#[test]
fn experiment_shape_and_determinism() {
    let mut cfg = ExperimentConfig::calibration_study("phone");
    cfg.seeds = vec![3, 4];
    let a = run_experiment(&cfg).unwrap();
    assert_eq!(a.len(), 2 * 256);
    assert_eq!(a, run_experiment(&cfg).unwrap());
    assert_eq!(&a[..256], &run_seed(&cfg, 3).unwrap()[..]);
    for r in &a {
        assert!(r.completion_time_s >= cfg.user.reaction_time_s);
        assert!(r.gaze_error_cm >= 0.0 && r.thumb_distance_cm >= 0.0);
    }
    // strategies appear in config order, 64 trials each
    let order: Vec<&str> = a[..256].chunks(64).map(|c| c[0].strategy.as_str()).collect();
    assert_eq!(order, ["NC", "EC", "AC1", "AC2"]);
}

#[test]
fn touch_only_technique_records_no_strategy() {
    let mut cfg = ExperimentConfig::technique_study("tablet", gazeswipe_core::Technique::PureCursor);
    cfg.seeds = vec![1];
    let r = run_experiment(&cfg).unwrap();
    assert_eq!(r.len(), 64);
    assert!(r.iter().all(|x| x.strategy == "none" && x.gaze_error_cm == 0.0));
}

#[test]
fn unknown_device_is_rejected() {
    let cfg = ExperimentConfig::calibration_study("watch");
    assert!(run_experiment(&cfg).is_err());
}

#[test]
fn default_models_land_near_the_configured_uncalibrated_error() {
    use gazeswipe_core::gaze::synthetic_frame;
    use gazeswipe_core::geometry::camera_cm_to_screen_cm;
    use gazeswipe_core::simulation::GazeModelConfig;
    for (model, profile, expected) in [
        (GazeModelConfig::phone(), DeviceProfile::phone(), 2.9),
        (GazeModelConfig::tablet(), DeviceProfile::tablet(), 3.5),
    ] {
        let mut rng = stream(99, Stream::User);
        let truth = Point2::new(3.0, 6.0);
        let n = 10_000;
        let mut total = 0.0;
        // one frame per freshly drawn user and posture
        for i in 0..n {
            let source = model.source_for(model.draw_bias(&mut rng));
            let pose = model.draw_start_pose(&mut rng);
            let f = synthetic_frame(truth, f64::from(i), &source, pose, &profile, &mut rng);
            total += camera_cm_to_screen_cm(f.raw_cm, &profile).distance(truth);
        }
        let mean = total / f64::from(n);
        assert!((mean - expected).abs() <= 0.4, "{} {mean}", profile.name);
    }
}
