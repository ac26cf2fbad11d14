//! Experiment runner for the hierarchical-environment collision model.
//!
//! Every experiment writes a CSV data file and a JSON summary next to it.
//! CSV output depends only on the configuration; grid cells may be computed
//! in parallel but are always written in grid order.

pub mod config;
pub mod experiments;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};
use thiserror::Error;

pub use config::{validate_config, ConfigError, Experiment, ExperimentConfig, RawConfig};
pub use experiments::{execute, ClassCounts, Outcome};

pub const VERSION: &str = concat!("qcollide ", env!("CARGO_PKG_VERSION"));

/// Environment variable capping the worker-thread count.
pub const THREADS_VAR: &str = "QCOLLIDE_THREADS";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("numeric: {0}")]
    Numeric(#[from] qcollide_core::Error),
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numeric(_) => 3,
            RunError::Io { .. } => 4,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

fn config_violation(message: String) -> RunError {
    RunError::Config(ConfigError(vec![config::Violation { line: None, message }]))
}

/// Reads [`THREADS_VAR`]; `None` when unset.
pub fn thread_cap() -> Result<Option<usize>, RunError> {
    match std::env::var(THREADS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(std::env::VarError::NotUnicode(_)) => Err(config_violation(format!("{THREADS_VAR} is not valid UTF-8"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(config_violation(format!("{THREADS_VAR}={v} is not a positive integer"))),
        },
    }
}

/// Files written by [`run_experiment`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub summary: Value,
}

/// Runs `config` on at most `threads` workers (pool default when `None`)
/// and writes the CSV and the JSON summary.
pub fn run_experiment(config: &ExperimentConfig, threads: Option<usize>) -> Result<RunReport, RunError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| config_violation(format!("cannot start worker pool: {e}")))?;

    let started = Instant::now();
    let outcome = pool.install(|| execute(config))?;
    let wall_time = started.elapsed().as_secs_f64();

    let csv_path = config.output_path.clone();
    let summary_path = config.summary_path();
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    }
    fs::write(&csv_path, &outcome.csv).map_err(|e| RunError::io(&csv_path, e))?;

    let summary = json!({
        "version": VERSION,
        "experiment": config.experiment.as_str(),
        "config": config.echo(),
        "wall_time_s": wall_time,
        "threads": pool.current_num_threads(),
        "classification_counts": outcome.counts.to_json(),
        "rows": outcome.csv.lines().count().saturating_sub(1),
        "csv": csv_path.display().to_string(),
        "results": outcome.results,
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary is plain JSON") + "\n";
    fs::write(&summary_path, text).map_err(|e| RunError::io(&summary_path, e))?;

    Ok(RunReport {
        csv_path,
        summary_path,
        summary,
    })
}
