//! One runner per experiment. Each returns its CSV text and the
//! experiment-specific part of the JSON summary; nothing here touches the
//! filesystem.

use qcollide_core::dynamics::{run, ConstantAncilla, JointState};
use qcollide_core::model::{classical_correlated_state, orthogonal_pair, quantum_correlated_state, BlochPure};
use qcollide_core::nonmarkov::{
    accumulated_backflow, coherence_cell, correlated_distance_series, distance_series, increments, marginal_product,
    phase_cell, Dynamics, PairSweep, WitnessSweep,
};
use qcollide_core::thermo::{alignment_report, thermo_trace};
use qcollide_core::DensityOperator;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{Experiment, ExperimentConfig, InitialCorrelation};
use crate::output::{header, Csv};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub markovian: usize,
    pub non_markovian: usize,
}

impl ClassCounts {
    fn add(&mut self, d: Dynamics) {
        match d {
            Dynamics::Markovian => self.markovian += 1,
            Dynamics::NonMarkovian => self.non_markovian += 1,
        }
    }

    fn of(d: Dynamics) -> Self {
        let mut c = Self::default();
        c.add(d);
        c
    }

    pub fn to_json(&self) -> Value {
        json!({ "Markovian": self.markovian, "NonMarkovian": self.non_markovian })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    pub counts: ClassCounts,
    pub results: Map<String, Value>,
}

pub type CoreResult<T> = qcollide_core::Result<T>;

/// Runs the experiment on the current rayon pool.
pub fn execute(config: &ExperimentConfig) -> CoreResult<Outcome> {
    match config.experiment {
        Experiment::PhaseDiagram => phase_diagram(config),
        Experiment::CoherenceDiagram => coherence_diagram(config),
        Experiment::CorrelationTrace => correlation_trace(config),
        Experiment::ThermoTrace => thermo(config),
        Experiment::HeatAlignment => heat_alignment(config),
    }
}

fn csv_for(config: &ExperimentConfig) -> Csv {
    Csv::new(header(config.experiment))
}

fn phase_diagram(config: &ExperimentConfig) -> CoreResult<Outcome> {
    let aux = config.params.auxiliary_state()?;
    let (gammas, deltas) = config.coupling_axes();
    let points: Vec<(f64, f64)> = gammas
        .iter()
        .flat_map(|&g| deltas.iter().map(move |&d| (g, d)))
        .collect();
    let cells = points
        .par_iter()
        .map(|&(g, d)| {
            phase_cell(
                g,
                d,
                &aux,
                &config.params,
                &config.grid,
                config.n_steps,
                config.thresholds,
            )
        })
        .collect::<CoreResult<Vec<_>>>()?;

    let mut csv = csv_for(config);
    let mut counts = ClassCounts::default();
    for c in &cells {
        csv.row(&[c.gamma, c.delta, c.measure], Some(c.class.as_str()));
        counts.add(c.class);
    }
    let mut results = Map::new();
    results.insert("gamma_axis".into(), json!(gammas));
    results.insert("delta_axis".into(), json!(deltas));
    Ok(Outcome {
        csv: csv.finish(),
        counts,
        results,
    })
}

fn coherence_diagram(config: &ExperimentConfig) -> CoreResult<Outcome> {
    let sweep = PairSweep::new(
        &config.params,
        &config.params.auxiliary_state()?,
        config.n_steps,
        config.thresholds,
    )?;
    let points: Vec<BlochPure> = config.grid.points().collect();
    let cells: Vec<_> = points.par_iter().map(|&b| coherence_cell(&sweep, b)).collect();

    let mut csv = csv_for(config);
    let mut counts = ClassCounts::default();
    let mut max = 0.0f64;
    for c in &cells {
        csv.row(&[c.theta, c.phi, c.measure], Some(c.class.as_str()));
        counts.add(c.class);
        max = max.max(c.measure);
    }
    let mut results = Map::new();
    results.insert("max_nm".into(), json!(max));
    Ok(Outcome {
        csv: csv.finish(),
        counts,
        results,
    })
}

/// Initial joint state of a correlation trace.
pub fn correlated_initial(config: &ExperimentConfig) -> CoreResult<DensityOperator> {
    let quantum = quantum_correlated_state(config.xi)?;
    match config.initial_correlation {
        InitialCorrelation::Quantum => Ok(quantum),
        InitialCorrelation::Classical => classical_correlated_state(config.xi),
        InitialCorrelation::None => marginal_product(&quantum),
    }
}

fn correlation_trace(config: &ExperimentConfig) -> CoreResult<Outcome> {
    let initial = correlated_initial(config)?;
    let ancilla = config.params.ancilla_state()?;
    let res = correlated_distance_series(&initial, &config.params, &ancilla, config.n_steps)?;

    let mut csv = csv_for(config);
    for (n, d) in res.series.iter().enumerate() {
        csv.row(&[n as f64, *d, res.bound], None);
    }
    let growth = accumulated_backflow(&increments(&res.series), config.thresholds.increment);
    let mut results = Map::new();
    results.insert("bound".into(), json!(res.bound));
    results.insert("max_distance".into(), json!(res.max()));
    results.insert(
        "final_distance".into(),
        json!(res.series.last().copied().unwrap_or(0.0)),
    );
    results.insert("accumulated_increase".into(), json!(growth));
    let class = if config.initial_correlation == InitialCorrelation::Classical {
        let witness = WitnessSweep::new(&initial, &config.params, config.n_steps, config.thresholds.increment)?;
        let points: Vec<BlochPure> = config.grid.points().collect();
        let w = points
            .par_iter()
            .map(|&b| witness.evaluate(b))
            .collect::<Vec<f64>>()
            .into_iter()
            .fold(0.0, f64::max);
        results.insert("witness".into(), json!(w));
        config.thresholds.classify(w)
    } else {
        config.thresholds.classify(growth)
    };
    Ok(Outcome {
        csv: csv.finish(),
        counts: ClassCounts::of(class),
        results,
    })
}

/// Backflow of the `{|0⟩, |1⟩}` pair at the configured coupling.
fn basis_pair_class(config: &ExperimentConfig) -> CoreResult<(f64, Dynamics)> {
    let (excited, ground) = orthogonal_pair(BlochPure::new(0.0, 0.0)?);
    let series = distance_series(
        (&excited, &ground),
        &config.params.auxiliary_state()?,
        &config.params,
        config.n_steps,
    )?;
    let nm = accumulated_backflow(&increments(&series), config.thresholds.increment);
    Ok((nm, config.thresholds.classify(nm)))
}

fn thermo(config: &ExperimentConfig) -> CoreResult<Outcome> {
    let start = JointState::product(&config.system_state.state(), &config.params.auxiliary_state()?)?;
    let traj = run(
        start,
        &config.params,
        config.n_steps,
        ConstantAncilla(config.params.ancilla_state()?),
    )?;
    let records = thermo_trace(&traj)?;

    let mut csv = csv_for(config);
    let mut worst = 0.0f64;
    let mut min_delta_s = f64::INFINITY;
    for r in &records {
        csv.row(
            &[
                r.step_index as f64,
                r.delta_s,
                r.beta_aq,
                r.heat,
                r.heat_dia,
                r.heat_coh,
                r.mutual_info,
            ],
            None,
        );
        worst = worst.max((r.delta_s - r.decomposition()).abs());
        min_delta_s = min_delta_s.min(r.delta_s);
    }
    let (nm, class) = basis_pair_class(config)?;
    let mut results = Map::new();
    results.insert("max_decomposition_error".into(), json!(worst));
    results.insert("min_delta_s".into(), json!(min_delta_s));
    results.insert("basis_pair_nm".into(), json!(nm));
    Ok(Outcome {
        csv: csv.finish(),
        counts: ClassCounts::of(class),
        results,
    })
}

fn heat_alignment(config: &ExperimentConfig) -> CoreResult<Outcome> {
    let report = alignment_report(&config.params, config.n_steps, config.system_state)?;
    let mut csv = csv_for(config);
    for r in &report.rows {
        csv.row(&[r.n as f64, r.heat, r.delta_distance], None);
    }
    let deltas: Vec<f64> = report.rows.iter().map(|r| r.delta_distance).collect();
    let nm = accumulated_backflow(&deltas, config.thresholds.increment);
    let mut results = Map::new();
    results.insert("sign_consistency".into(), json!(report.sign_consistency));
    results.insert("gated_steps".into(), json!(report.gated_steps));
    results.insert("basis_pair_nm".into(), json!(nm));
    Ok(Outcome {
        csv: csv.finish(),
        counts: ClassCounts::of(config.thresholds.classify(nm)),
        results,
    })
}
