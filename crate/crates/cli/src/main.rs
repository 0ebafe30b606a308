//! `gazeswipe`: run simulated experiments, summarize them, replay event logs and serve
//! live sessions.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use gazeswipe_core::calibration::{Calibrator, CalibratorConfig, SampleStore, Strategy};
use gazeswipe_core::gaze::{GazePipeline, OneEuroConfig};
use gazeswipe_core::geometry::{builtin_profiles, profile_by_name};
use gazeswipe_core::interaction::{
    generate_layout, read_event_log, Engine, GazeSwipe, GazeSwipeConfig, InteractionEngine, Phase, PureCursor,
    PureCursorConfig, Technique,
};
use gazeswipe_core::metrics::{import_csv, summarize, window_series_by_group, write_csv, GroupSummary, WindowSeries};
use gazeswipe_core::simulation::{run_experiment, ExperimentConfig};
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "gazeswipe", version, about = "Gaze-and-swipe target selection simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a simulated experiment and write one CSV row per trial.
    ExperimentRun {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Run this single seed instead of the config's seed list.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of targets per condition.
        #[arg(long)]
        targets: Option<u32>,
    },
    /// Summarize a trial CSV: per-group statistics and sliding-window error series.
    ExperimentReport {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        window: usize,
        #[arg(long, default_value_t = 4)]
        step: usize,
        /// Seed of the bootstrap resampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-run a JSON-lines event log through the interaction state machine.
    Replay {
        #[arg(long)]
        events: PathBuf,
        #[arg(long, default_value = "AC2")]
        strategy: String,
        #[arg(long, default_value = "phone")]
        profile: String,
        #[arg(long, default_value = "GazeSwipe")]
        technique: String,
        /// Layout seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Calibration store (JSON lines) installed before replay; required for EC.
        #[arg(long)]
        calibration: Option<PathBuf>,
    },
    /// List the built-in device profiles.
    Profiles {
        /// Print the full profiles as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Serve live sessions over HTTP and WebSocket.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    // output is buffered so that nothing reaches stdout when a command fails
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::ExperimentRun { config, out, seed, targets } => experiment_run(&config, &out, seed, targets),
        Command::ExperimentReport { input, window, step, seed } => experiment_report(&input, window, step, seed),
        Command::Replay { events, strategy, profile, technique, seed, calibration } => {
            replay(&events, &strategy, &profile, &technique, seed, calibration.as_deref())
        }
        Command::Profiles { json } => profiles(json),
        Command::Serve { port, host } => serve(&host, port),
    }
}

fn experiment_run(config: &PathBuf, out: &PathBuf, seed: Option<u64>, targets: Option<u32>) -> Result<String> {
    let text = std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(s) = seed {
        cfg.seeds = vec![s];
    }
    if let Some(n) = targets {
        cfg.targets_per_condition = n;
    }
    let records = run_experiment(&cfg)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &records)?;
    std::fs::write(out, buf).with_context(|| format!("writing {}", out.display()))?;
    Ok(String::new())
}

#[derive(Serialize)]
struct Report {
    groups: Vec<GroupSummary>,
    windows: Vec<WindowSeries>,
}

fn experiment_report(input: &PathBuf, window: usize, step: usize, seed: u64) -> Result<String> {
    let records = import_csv(input).with_context(|| format!("reading {}", input.display()))?;
    let summary = summarize(&records, seed)?;
    let windows = window_series_by_group(&records, window, step)?;
    Ok(serde_json::to_string_pretty(&Report { groups: summary.groups, windows })? + "\n")
}

fn replay(
    events: &PathBuf,
    strategy: &str,
    profile: &str,
    technique: &str,
    seed: u64,
    calibration: Option<&std::path::Path>,
) -> Result<String> {
    let profile = profile_by_name(profile)?;
    let strategy = Strategy::from_str(strategy)?;
    let technique = Technique::from_str(technique).map_err(anyhow::Error::msg)?;
    let file = File::open(events).with_context(|| format!("reading {}", events.display()))?;
    let log = read_event_log(BufReader::new(file))?;
    let layout = generate_layout(seed, &profile)?;
    let mut engine = match technique {
        Technique::GazeSwipe => {
            let pipeline = GazePipeline::new(profile.clone(), OneEuroConfig::default())?;
            let mut calibrator = Calibrator::new(CalibratorConfig::with_strategy(strategy));
            match (calibration, strategy) {
                (Some(path), _) => {
                    let f = File::open(path).with_context(|| format!("reading {}", path.display()))?;
                    let mut store = SampleStore::read_jsonl(BufReader::new(f))?;
                    if strategy == Strategy::Ec {
                        store.freeze();
                    }
                    calibrator.install_store(store);
                }
                (None, Strategy::Ec) => bail!("replaying under EC needs --calibration with the explicit store"),
                (None, _) => {}
            }
            Engine::GazeSwipe(Box::new(GazeSwipe::new(GazeSwipeConfig::default(), pipeline, calibrator, Phase::Hover)))
        }
        Technique::PureCursor => Engine::PureCursor(PureCursor::new(PureCursorConfig::default(), profile.clone())),
    };
    let mut out = String::new();
    for (i, ev) in log.iter().enumerate() {
        let step = engine.handle(ev, &layout).with_context(|| format!("event {}", i + 1))?;
        let line = json!({
            "t": ev.timestamp(),
            "kind": ev.kind(),
            "phase": engine.state().phase,
            "gesture": step.gesture,
            "outcome": step.outcome,
            "sample_recorded": step.sample_recorded,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    Ok(out)
}

fn profiles(as_json: bool) -> Result<String> {
    let all = builtin_profiles();
    if as_json {
        return Ok(serde_json::to_string_pretty(&all)? + "\n");
    }
    Ok(all.iter().map(|p| format!("{}\n", p.name)).collect())
}

fn serve(host: &str, port: u16) -> Result<String> {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .with_context(|| format!("binding {host}:{port}"))?;
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        gazeswipe_service::serve(listener, gazeswipe_service::AppState::new(), shutdown).await?;
        Ok(String::new())
    })
}
