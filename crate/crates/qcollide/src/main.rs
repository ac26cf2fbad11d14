use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcollide::config::build;
use qcollide::{run_experiment, thread_cap, Experiment, RawConfig, RunError};

#[derive(Parser)]
#[command(
    name = "qcollide",
    version,
    about = "Collision-model experiments: CSV data and JSON summaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Markovian / non-Markovian classification over the (gamma, delta) plane.
    PhaseDiagram(Options),
    /// Per-pair classification over the Bloch sphere with a coherent environment.
    CoherenceDiagram(Options),
    /// Distance between a correlated start and the product of its marginals.
    CorrelationTrace(Options),
    /// Entropy change, heat and correlations per collision.
    ThermoTrace(Options),
    /// Heat per collision against the change of distinguishability.
    HeatAlignment(Options),
}

#[derive(Args)]
struct Options {
    /// key=value configuration file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one key; may be repeated. Applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Shorthand for --set output_path=PATH.
    #[arg(long, short, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Shorthand for --set gamma=VALUE.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Shorthand for --set delta=VALUE.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Shorthand for --set p=VALUE.
    #[arg(long)]
    p: Option<String>,
    /// Shorthand for --set xi=VALUE.
    #[arg(long)]
    xi: Option<String>,
    /// Shorthand for --set initial_correlation=VALUE.
    #[arg(long, value_name = "quantum|classical|none")]
    correlation: Option<String>,
    /// Shorthand for --set n_steps=VALUE.
    #[arg(long)]
    n_steps: Option<String>,
}

impl Command {
    fn split(self) -> (Experiment, Options) {
        match self {
            Command::PhaseDiagram(o) => (Experiment::PhaseDiagram, o),
            Command::CoherenceDiagram(o) => (Experiment::CoherenceDiagram, o),
            Command::CorrelationTrace(o) => (Experiment::CorrelationTrace, o),
            Command::ThermoTrace(o) => (Experiment::ThermoTrace, o),
            Command::HeatAlignment(o) => (Experiment::HeatAlignment, o),
        }
    }
}

fn load(experiment: Experiment, opts: Options) -> Result<qcollide::ExperimentConfig, RunError> {
    let mut raw = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
                path: path.clone(),
                source,
            })?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    for s in &opts.set {
        raw.set(s)?;
    }
    let shorthands = [
        ("gamma", opts.gamma),
        ("delta", opts.delta),
        ("p", opts.p),
        ("xi", opts.xi),
        ("initial_correlation", opts.correlation),
        ("n_steps", opts.n_steps),
        ("output_path", opts.output.map(|p| p.display().to_string())),
    ];
    for (key, value) in shorthands {
        if let Some(v) = value {
            raw.push(key, &v);
        }
    }
    Ok(build(&raw, Some(experiment))?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, opts) = cli.command.split();
    let result = thread_cap().and_then(|threads| {
        let config = load(experiment, opts)?;
        run_experiment(&config, threads)
    });
    match result {
        Ok(report) => {
            println!("{}", report.csv_path.display());
            println!("{}", report.summary_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qcollide: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
