//! Flat `key=value` experiment configuration.
//!
//! One assignment per line; blank lines and lines starting with `#` are
//! ignored. Angles may be written as plain numbers or as multiples of `pi`
//! (`pi/14`, `2*pi/9`, `0.5pi`). Unknown keys are rejected.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qcollide_core::model::CollisionParams;
use qcollide_core::nonmarkov::{GridSpec, Thresholds};
use qcollide_core::thermo::SystemStart;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    PhaseDiagram,
    CoherenceDiagram,
    CorrelationTrace,
    ThermoTrace,
    HeatAlignment,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::PhaseDiagram,
        Experiment::CoherenceDiagram,
        Experiment::CorrelationTrace,
        Experiment::ThermoTrace,
        Experiment::HeatAlignment,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::PhaseDiagram => "phase-diagram",
            Experiment::CoherenceDiagram => "coherence-diagram",
            Experiment::CorrelationTrace => "correlation-trace",
            Experiment::ThermoTrace => "thermo-trace",
            Experiment::HeatAlignment => "heat-alignment",
        }
    }

    /// Default Bloch grid for the experiment.
    pub fn default_grid(&self) -> GridSpec {
        match self {
            Experiment::PhaseDiagram => GridSpec::inner_default(),
            Experiment::CorrelationTrace => GridSpec::witness_default(),
            _ => GridSpec::measure_default(),
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialCorrelation {
    Quantum,
    Classical,
    None,
}

impl InitialCorrelation {
    pub fn as_str(&self) -> &'static str {
        match self {
            InitialCorrelation::Quantum => "quantum",
            InitialCorrelation::Classical => "classical",
            InitialCorrelation::None => "none",
        }
    }
}

impl FromStr for InitialCorrelation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quantum" => Ok(Self::Quantum),
            "classical" => Ok(Self::Classical),
            "none" => Ok(Self::None),
            _ => Err(format!(
                "unknown correlation '{s}' (expected quantum, classical or none)"
            )),
        }
    }
}

fn start_str(s: SystemStart) -> &'static str {
    match s {
        SystemStart::Excited => "excited",
        SystemStart::Ground => "ground",
    }
}

fn parse_start(s: &str) -> Result<SystemStart, String> {
    match s {
        "excited" | "0" => Ok(SystemStart::Excited),
        "ground" | "1" => Ok(SystemStart::Ground),
        _ => Err(format!("unknown system state '{s}' (expected excited or ground)")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub params: CollisionParams,
    /// Bloch grid: inner maximisation (phase diagram), plotted cells
    /// (coherence diagram) or witness grid (classical correlation trace).
    pub grid: GridSpec,
    pub n_steps: usize,
    pub xi: f64,
    pub initial_correlation: InitialCorrelation,
    pub output_path: PathBuf,
    pub thresholds: Thresholds,
    /// Uniform coupling axes `k·(π/2)/points`, `k = 1..=points`.
    pub gamma_points: usize,
    pub delta_points: usize,
    /// Merge `γ = π/14` and `δ ∈ {π/9, π/6}` into the phase-diagram axes.
    pub anchors: bool,
    /// Initial system state for `thermo-trace`; trajectory supplying the
    /// heat series for `heat-alignment`.
    pub system_state: SystemStart,
}

pub const KEYS: &[&str] = &[
    "experiment",
    "gamma",
    "delta",
    "temperature",
    "omega_s",
    "omega_e",
    "p",
    "phi1",
    "phi2",
    "n_steps",
    "theta_points",
    "phi_points",
    "theta_max",
    "xi",
    "initial_correlation",
    "output_path",
    "increment_threshold",
    "classification_threshold",
    "gamma_points",
    "delta_points",
    "anchors",
    "system_state",
];

/// One problem found while validating a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// 1-based line in the file; `None` for command-line overrides and
    /// missing fields.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub Vec<Violation>);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: Option<usize>,
}

/// Raw assignments in the order they were given; later ones win.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: Vec<Entry>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        let mut violations = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            match split_assignment(trimmed) {
                Ok((k, v)) => raw.entries.push(Entry {
                    key: k.to_string(),
                    value: v.to_string(),
                    line: Some(idx + 1),
                }),
                Err(message) => violations.push(Violation {
                    line: Some(idx + 1),
                    message,
                }),
            }
        }
        if violations.is_empty() {
            Ok(raw)
        } else {
            Err(ConfigError(violations))
        }
    }

    /// Adds a `key=value` override taken from the command line.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (k, v) = split_assignment(assignment.trim()).map_err(|message| {
            ConfigError(vec![Violation {
                line: None,
                message: format!("--set {assignment}: {message}"),
            }])
        })?;
        self.push(k, v);
        Ok(())
    }

    pub fn push(&mut self, key: &str, value: &str) {
        self.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line: None,
        });
    }

    fn last(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().rev().find(|e| e.key == key)
    }
}

fn split_assignment(s: &str) -> Result<(&str, &str), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, found '{s}'"))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() {
        return Err("missing key before '='".to_string());
    }
    Ok((k, v))
}

/// Parses `3.5`, `pi`, `pi/14`, `2*pi/9`, `2pi/9`, `-pi/2` and `0.5*pi`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let bad = || format!("'{s}' is not a number");
    if let Ok(v) = s.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    }
    let (numerator, denominator) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let coefficient = match numerator.strip_suffix("pi") {
        Some(c) => {
            let c = c.trim().trim_end_matches('*').trim();
            match c {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => c.parse::<f64>().map_err(|_| bad())?,
            }
        }
        None => return Err(bad()),
    };
    let divisor = match denominator {
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
        None => 1.0,
    };
    let v = coefficient * PI / divisor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| format!("'{s}' is not a non-negative integer"))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("'{s}' is not a boolean")),
    }
}

/// Validates a configuration file's text. `experiment` fills the field when
/// the text does not set it (the subcommand); a conflicting value in the
/// text is a violation.
pub fn validate_config(text: &str, experiment: Option<Experiment>) -> Result<ExperimentConfig, ConfigError> {
    let raw = RawConfig::parse(text)?;
    build(&raw, experiment)
}

/// Turns raw assignments into a fully populated configuration, collecting
/// every violation.
pub fn build(raw: &RawConfig, subcommand: Option<Experiment>) -> Result<ExperimentConfig, ConfigError> {
    let mut violations = Vec::new();
    for e in &raw.entries {
        if !KEYS.contains(&e.key.as_str()) {
            violations.push(Violation {
                line: e.line,
                message: format!("unknown key '{}'", e.key),
            });
        }
    }

    let field = |key: &str| -> Option<&Entry> { raw.last(key) };

    let experiment = match field("experiment") {
        Some(e) => match e.value.parse::<Experiment>() {
            Ok(x) if subcommand.is_some_and(|s| s != x) => {
                violations.push(Violation {
                    line: e.line,
                    message: format!("experiment '{x}' conflicts with subcommand '{}'", subcommand.unwrap()),
                });
                None
            }
            Ok(x) => Some(x),
            Err(message) => {
                violations.push(Violation { line: e.line, message });
                None
            }
        },
        None => subcommand,
    };
    if experiment.is_none() && field("experiment").is_none() {
        violations.push(Violation {
            line: None,
            message: "missing required field 'experiment'".to_string(),
        });
    }

    macro_rules! get {
        ($key:literal, $parse:expr, $default:expr) => {{
            match field($key) {
                Some(e) => match $parse(&e.value) {
                    Ok(v) => v,
                    Err(m) => {
                        violations.push(Violation {
                            line: e.line,
                            message: format!("{}: {}", $key, m),
                        });
                        $default
                    }
                },
                None => $default,
            }
        }};
    }

    let defaults = CollisionParams::default();
    let params = CollisionParams {
        gamma: get!("gamma", parse_real, defaults.gamma),
        delta: get!("delta", parse_real, defaults.delta),
        temperature: get!("temperature", parse_real, defaults.temperature),
        omega_s: get!("omega_s", parse_real, defaults.omega_s),
        omega_e: get!("omega_e", parse_real, defaults.omega_e),
        p: get!("p", parse_real, defaults.p),
        phi1: get!("phi1", parse_real, defaults.phi1),
        phi2: get!("phi2", parse_real, defaults.phi2),
    };
    let n_steps = get!("n_steps", parse_count, 200);
    let default_grid = experiment.unwrap_or(Experiment::PhaseDiagram).default_grid();
    let theta_points = get!("theta_points", parse_count, default_grid.theta_points);
    let phi_points = get!("phi_points", parse_count, default_grid.phi_points);
    let theta_max = get!("theta_max", parse_real, default_grid.theta_max);
    let xi = get!("xi", parse_real, 0.855);
    let initial_correlation = get!(
        "initial_correlation",
        |s: &str| s.parse::<InitialCorrelation>(),
        InitialCorrelation::Quantum
    );
    let output_path = match field("output_path") {
        Some(e) if e.value.is_empty() => {
            violations.push(Violation {
                line: e.line,
                message: "output_path: must not be empty".to_string(),
            });
            PathBuf::new()
        }
        Some(e) => PathBuf::from(&e.value),
        None => PathBuf::from(format!("{}.csv", experiment.map_or("output", |e| e.as_str()))),
    };
    let thresholds = Thresholds {
        increment: get!("increment_threshold", parse_real, Thresholds::default().increment),
        classification: get!(
            "classification_threshold",
            parse_real,
            Thresholds::default().classification
        ),
    };
    let gamma_points = get!("gamma_points", parse_count, 25);
    let delta_points = get!("delta_points", parse_count, 25);
    let anchors = get!("anchors", parse_bool, true);
    let system_state = get!("system_state", parse_start, SystemStart::Ground);

    // range checks, attributed to the line that set the value
    let mut range = |key: &str, ok: bool, what: &str, value: String| {
        if !ok {
            violations.push(Violation {
                line: raw.last(key).and_then(|e| e.line),
                message: format!("{key}={value} {what}"),
            });
        }
    };
    range(
        "gamma",
        (0.0..=FRAC_PI_2).contains(&params.gamma),
        "out of range [0, pi/2]",
        params.gamma.to_string(),
    );
    range(
        "delta",
        (0.0..=FRAC_PI_2).contains(&params.delta),
        "out of range [0, pi/2]",
        params.delta.to_string(),
    );
    range(
        "temperature",
        params.temperature > 0.0,
        "must be positive",
        params.temperature.to_string(),
    );
    range(
        "omega_s",
        params.omega_s > 0.0,
        "must be positive",
        params.omega_s.to_string(),
    );
    range(
        "omega_e",
        params.omega_e > 0.0,
        "must be positive",
        params.omega_e.to_string(),
    );
    range(
        "p",
        (0.0..=1.0).contains(&params.p),
        "out of range [0, 1]",
        params.p.to_string(),
    );
    range("n_steps", n_steps >= 1, "must be at least 1", n_steps.to_string());
    range(
        "theta_points",
        theta_points >= 2,
        "must be at least 2",
        theta_points.to_string(),
    );
    range(
        "phi_points",
        phi_points >= 2,
        "must be at least 2",
        phi_points.to_string(),
    );
    range(
        "theta_max",
        theta_max > 0.0 && theta_max <= PI,
        "out of range (0, pi]",
        theta_max.to_string(),
    );
    range("xi", (0.0..=1.0).contains(&xi), "out of range [0, 1]", xi.to_string());
    range(
        "increment_threshold",
        thresholds.increment >= 0.0,
        "must be non-negative",
        thresholds.increment.to_string(),
    );
    range(
        "classification_threshold",
        thresholds.classification >= 0.0,
        "must be non-negative",
        thresholds.classification.to_string(),
    );
    range(
        "gamma_points",
        gamma_points >= 1,
        "must be at least 1",
        gamma_points.to_string(),
    );
    range(
        "delta_points",
        delta_points >= 1,
        "must be at least 1",
        delta_points.to_string(),
    );

    let grid = match GridSpec::new(theta_points, phi_points, theta_max) {
        Ok(g) => Some(g),
        Err(e) => {
            if violations.is_empty() {
                violations.push(Violation {
                    line: None,
                    message: e.to_string(),
                });
            }
            None
        }
    };
    match (experiment, grid) {
        (Some(experiment), Some(grid)) if violations.is_empty() => {
            if experiment == Experiment::ThermoTrace && params.require_resonance().is_err() {
                return Err(ConfigError(vec![Violation {
                    line: raw.last("omega_e").or(raw.last("omega_s")).and_then(|e| e.line),
                    message: "thermo-trace requires omega_s = omega_e".to_string(),
                }]));
            }
            Ok(ExperimentConfig {
                experiment,
                params,
                grid,
                n_steps,
                xi,
                initial_correlation,
                output_path,
                thresholds,
                gamma_points,
                delta_points,
                anchors,
                system_state,
            })
        }
        _ => Err(ConfigError(violations)),
    }
}

impl ExperimentConfig {
    /// Defaults for `experiment`.
    pub fn new(experiment: Experiment) -> Self {
        let mut raw = RawConfig::default();
        raw.push("experiment", experiment.as_str());
        build(&raw, None).expect("defaults validate")
    }

    /// Path of the JSON summary written next to the CSV.
    pub fn summary_path(&self) -> PathBuf {
        self.output_path.with_extension("json")
    }

    /// `(γ, δ)` axes of the phase diagram, ascending.
    pub fn coupling_axes(&self) -> (Vec<f64>, Vec<f64>) {
        let axis = |points: usize, extra: &[f64]| {
            let mut v: Vec<f64> = (1..=points).map(|k| FRAC_PI_2 * k as f64 / points as f64).collect();
            if self.anchors {
                v.extend_from_slice(extra);
            }
            v.sort_by(f64::total_cmp);
            v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            v
        };
        (
            axis(self.gamma_points, &[PI / 14.0]),
            axis(self.delta_points, &[PI / 9.0, PI / 6.0]),
        )
    }

    /// Every effective setting, for the JSON summary.
    pub fn echo(&self) -> Value {
        let p = &self.params;
        let mut m = Map::new();
        m.insert("experiment".into(), json!(self.experiment.as_str()));
        m.insert("gamma".into(), json!(p.gamma));
        m.insert("delta".into(), json!(p.delta));
        m.insert("temperature".into(), json!(p.temperature));
        m.insert("omega_s".into(), json!(p.omega_s));
        m.insert("omega_e".into(), json!(p.omega_e));
        m.insert("p".into(), json!(p.p));
        m.insert("phi1".into(), json!(p.phi1));
        m.insert("phi2".into(), json!(p.phi2));
        m.insert("n_steps".into(), json!(self.n_steps));
        m.insert("theta_points".into(), json!(self.grid.theta_points));
        m.insert("phi_points".into(), json!(self.grid.phi_points));
        m.insert("theta_max".into(), json!(self.grid.theta_max));
        m.insert("xi".into(), json!(self.xi));
        m.insert("initial_correlation".into(), json!(self.initial_correlation.as_str()));
        m.insert("output_path".into(), json!(self.output_path.display().to_string()));
        m.insert("increment_threshold".into(), json!(self.thresholds.increment));
        m.insert("classification_threshold".into(), json!(self.thresholds.classification));
        m.insert("gamma_points".into(), json!(self.gamma_points));
        m.insert("delta_points".into(), json!(self.delta_points));
        m.insert("anchors".into(), json!(self.anchors));
        m.insert("system_state".into(), json!(start_str(self.system_state)));
        Value::Object(m)
    }
}
