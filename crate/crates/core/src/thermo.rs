//! Per-collision thermodynamics of the system.
//!
//! Heat is the energy the auxiliary qubit loses during the `S–A_Q`
//! collision (positive when it flows into the system). The entropy change
//! of the system over that collision splits into a relative-entropy term,
//! `β_AQ·ΔQ` and the mutual information carried into the collision. The
//! split needs the auxiliary qubit to be in Gibbs form before the
//! collision, which holds when the system starts diagonal and the whole
//! environment is thermal; [`entropy_change`] refuses other inputs.

use alloc::vec::Vec;

use crate::dynamics::{run, ConstantAncilla, JointState, StepRecord, Trajectory};
use crate::error::{Error, Result};
use crate::model::{qubit_hamiltonian, CollisionParams};
use crate::qmat::{relative_entropy, trace_distance, von_neumann_entropy, DensityOperator};

/// Largest off-diagonal modulus of `ρ^{A_Q}` still accepted as Gibbs form.
pub const DIAGONAL_GATE: f64 = 1e-10;
/// Steps where `|ΔQ|` or `|ΔD|` is at or below this are left out of the
/// alignment statistic.
pub const ALIGNMENT_GATE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoRecord {
    pub step_index: usize,
    /// `S(ρ̃^S_{n+1}) − S(ρ^S_n)`, computed directly.
    pub delta_s: f64,
    /// `D(ρ̃^{S,A_Q}_{n+1} ‖ ρ̃^S_{n+1} ⊗ ρ^{A_Q}_n)`.
    pub rel_entropy_term: f64,
    pub beta_aq: f64,
    pub heat: f64,
    pub heat_dia: f64,
    pub heat_coh: f64,
    /// `I(ρ^{S,A_Q}_n)`.
    pub mutual_info: f64,
}

impl ThermoRecord {
    /// The three-term right-hand side that should equal `delta_s`.
    pub fn decomposition(&self) -> f64 {
        self.rel_entropy_term + self.beta_aq * self.heat - self.mutual_info
    }
}

fn check_dim(rho: &DensityOperator, expected: usize) -> Result<()> {
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `Tr[(ρ_pre − ρ_post) H_AQ]`.
pub fn heat(rho_aq_pre: &DensityOperator, rho_aq_post_u: &DensityOperator, omega: f64) -> Result<f64> {
    check_dim(rho_aq_pre, 2)?;
    check_dim(rho_aq_post_u, 2)?;
    let h = qubit_hamiltonian(omega)?;
    Ok(h.expectation(rho_aq_pre) - h.expectation(rho_aq_post_u))
}

/// Heat of one collision split into population and coherence parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatSplit {
    pub diagonal: f64,
    pub coherent: f64,
}

impl HeatSplit {
    pub fn total(&self) -> f64 {
        self.diagonal + self.coherent
    }
}

/// Closed-form heat of the collision `U(γ)` on the pre-collision state:
/// `ω sin²γ (ρ_{|10⟩} − ρ_{|01⟩})` from populations and
/// `ω sin 2γ Im⟨01|ρ|10⟩` from the exchange coherence.
pub fn heat_split(rho_saq_pre: &DensityOperator, gamma: f64, omega: f64) -> Result<HeatSplit> {
    check_dim(rho_saq_pre, 4)?;
    let m = rho_saq_pre.matrix();
    let s = libm::sin(gamma);
    Ok(HeatSplit {
        diagonal: omega * s * s * (m[(2, 2)].re - m[(1, 1)].re),
        coherent: omega * m[(1, 2)].im * libm::sin(2.0 * gamma),
    })
}

/// Inverse temperature of a qubit in Gibbs form, `ln(p₁/p₀)/ω`.
pub fn beta_of(rho_aq: &DensityOperator, omega: f64) -> Result<f64> {
    check_dim(rho_aq, 2)?;
    qubit_hamiltonian(omega)?;
    let m = rho_aq.matrix();
    let off_diagonal = m[(0, 1)].norm();
    if off_diagonal > DIAGONAL_GATE {
        return Err(Error::NotThermalForm { off_diagonal });
    }
    let excited = m[(0, 0)].re;
    let ground = m[(1, 1)].re;
    if !(excited > 0.0 && excited < 1.0 && ground > 0.0 && ground < 1.0) {
        return Err(Error::DegeneratePopulation { excited, ground });
    }
    if excited == ground {
        return Err(Error::InfiniteTemperature { excited, ground });
    }
    if excited > ground {
        return Err(Error::NegativeTemperature { excited, ground });
    }
    Ok(libm::log(ground / excited) / omega)
}

/// `S(ρ_S) + S(ρ_AQ) − S(ρ)` of a two-qubit state.
pub fn mutual_information(rho: &DensityOperator) -> Result<f64> {
    check_dim(rho, 4)?;
    let s = rho.qubit_marginal(0)?;
    let a = rho.qubit_marginal(1)?;
    Ok(von_neumann_entropy(&s) + von_neumann_entropy(&a) - von_neumann_entropy(rho))
}

/// Thermodynamics of the collision recorded in `record`, whose input state
/// was `prev`.
pub fn entropy_change(record: &StepRecord, prev: &JointState, params: &CollisionParams) -> Result<ThermoRecord> {
    let omega = params.require_resonance()?;
    let system_before = prev.system();
    let aux_before = prev.auxiliary();
    let beta_aq = beta_of(&aux_before, omega)?;

    let post = &record.rho_saq_post_u;
    let system_after = post.qubit_marginal(0)?;
    let aux_after = post.qubit_marginal(1)?;

    let delta_s = von_neumann_entropy(&system_after) - von_neumann_entropy(&system_before);
    let rel_entropy_term = relative_entropy(post, &system_after.tensor(&aux_before))?;
    let heat = heat(&aux_before, &aux_after, omega)?;
    let split = heat_split(prev.rho(), params.gamma, omega)?;
    let mutual_info = mutual_information(prev.rho())?;

    Ok(ThermoRecord {
        step_index: record.step_index,
        delta_s,
        rel_entropy_term,
        beta_aq,
        heat,
        heat_dia: split.diagonal,
        heat_coh: split.coherent,
        mutual_info,
    })
}

/// [`entropy_change`] for every collision of a trajectory.
pub fn thermo_trace(trajectory: &Trajectory) -> Result<Vec<ThermoRecord>> {
    let mut prev = trajectory.initial.clone();
    let mut out = Vec::with_capacity(trajectory.steps.len());
    for step in &trajectory.steps {
        out.push(entropy_change(step, &prev, &trajectory.params)?);
        prev = step.joint();
    }
    Ok(out)
}

/// Heat per collision without the Gibbs-form premise: `(ΔQ_n, split_n)` for
/// `n = 1..=N`.
pub fn heat_series(trajectory: &Trajectory) -> Result<Vec<(f64, HeatSplit)>> {
    let omega = trajectory.params.require_resonance()?;
    let mut out = Vec::with_capacity(trajectory.steps.len());
    for (k, step) in trajectory.steps.iter().enumerate() {
        let prev = trajectory.joint_state(k);
        let q = heat(&prev.qubit_marginal(1)?, &step.rho_saq_post_u.qubit_marginal(1)?, omega)?;
        out.push((q, heat_split(prev, trajectory.params.gamma, omega)?));
    }
    Ok(out)
}

/// Which member of the `{|0⟩, |1⟩}` pair supplies the heat series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SystemStart {
    Excited,
    #[default]
    Ground,
}

impl SystemStart {
    pub fn state(&self) -> DensityOperator {
        match self {
            SystemStart::Excited => DensityOperator::basis(2, 0),
            SystemStart::Ground => DensityOperator::basis(2, 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentRow {
    pub n: usize,
    /// `ΔQ_n`, the heat of collision `n`.
    pub heat: f64,
    /// `D_n − D_{n−1}`.
    pub delta_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport {
    pub rows: Vec<AlignmentRow>,
    /// Steps where both `|ΔQ_n|` and `|ΔD_n|` exceed [`ALIGNMENT_GATE`].
    pub gated_steps: usize,
    /// Share of gated steps carrying the majority relative sign of
    /// `ΔQ_n·ΔD_n`; `1.0` when no step passes the gate.
    pub sign_consistency: f64,
}

/// Heat flux against the change of distance for the pair `{|0⟩, |1⟩}`.
/// Both trajectories start with `params.auxiliary_state()` and consume
/// `params.ancilla_state()`.
pub fn alignment_report(params: &CollisionParams, n_steps: usize, heat_on: SystemStart) -> Result<AlignmentReport> {
    let aux = params.auxiliary_state()?;
    let eta = params.ancilla_state()?;
    let excited = run(
        JointState::product(&DensityOperator::basis(2, 0), &aux)?,
        params,
        n_steps,
        ConstantAncilla(eta.clone()),
    )?;
    let ground = run(
        JointState::product(&DensityOperator::basis(2, 1), &aux)?,
        params,
        n_steps,
        ConstantAncilla(eta),
    )?;
    let distances = excited
        .system_states()
        .iter()
        .zip(ground.system_states().iter())
        .map(|(a, b)| trace_distance(a, b))
        .collect::<Result<Vec<f64>>>()?;
    let heats = match heat_on {
        SystemStart::Excited => heat_series(&excited)?,
        SystemStart::Ground => heat_series(&ground)?,
    };

    let rows: Vec<AlignmentRow> = heats
        .iter()
        .enumerate()
        .map(|(k, (q, _))| AlignmentRow {
            n: k + 1,
            heat: *q,
            delta_distance: distances[k + 1] - distances[k],
        })
        .collect();

    let (mut same, mut opposite) = (0usize, 0usize);
    for row in &rows {
        if row.heat.abs() > ALIGNMENT_GATE && row.delta_distance.abs() > ALIGNMENT_GATE {
            if (row.heat > 0.0) == (row.delta_distance > 0.0) {
                same += 1;
            } else {
                opposite += 1;
            }
        }
    }
    let gated_steps = same + opposite;
    let sign_consistency = if gated_steps == 0 {
        1.0
    } else {
        same.max(opposite) as f64 / gated_steps as f64
    };
    Ok(AlignmentReport {
        rows,
        gated_steps,
        sign_consistency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::collide;
    use crate::model::{partial_swap, quantum_correlated_state, thermal_state};
    use crate::qmat::{c64, ComplexMatrix};
    use core::f64::consts::{FRAC_PI_2, PI};

    fn thermal() -> DensityOperator {
        thermal_state(1.0, 1.0).unwrap()
    }

    fn ground_start() -> JointState {
        JointState::product(&DensityOperator::basis(2, 1), &thermal()).unwrap()
    }

    #[test]
    fn heat_of_identical_states_is_zero() {
        assert_eq!(heat(&thermal(), &thermal(), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn full_swap_heat() {
        let params = CollisionParams::with_coupling(FRAC_PI_2, PI / 6.0);
        let start = ground_start();
        let rec = collide(&start, &thermal(), &params).unwrap();
        let q = heat(&start.auxiliary(), &rec.rho_saq_post_u.qubit_marginal(1).unwrap(), 1.0).unwrap();
        let expected = 1.0 / (1.0 + core::f64::consts::E);
        assert!((q - expected).abs() < 1e-14);
        assert!((q - 0.268_941).abs() < 1e-6);
    }

    #[test]
    fn no_interaction_no_heat() {
        let params = CollisionParams::with_coupling(0.0, PI / 6.0);
        let traj = run(ground_start(), &params, 20, ConstantAncilla(thermal())).unwrap();
        for (q, split) in heat_series(&traj).unwrap() {
            assert_eq!(q, 0.0);
            assert_eq!(split.total(), 0.0);
        }
    }

    #[test]
    fn real_coherence_gives_no_coherent_heat() {
        let rho = quantum_correlated_state(0.6).unwrap();
        let split = heat_split(&rho, 0.4, 1.0).unwrap();
        assert_eq!(split.coherent, 0.0);
    }

    #[test]
    fn product_split_matches_population_formula() {
        let gamma = 0.3;
        let system = DensityOperator::new(ComplexMatrix::from_real_diagonal(&[0.2, 0.8])).unwrap();
        let aux = thermal();
        let rho = system.tensor(&aux);
        let split = heat_split(&rho, gamma, 1.0).unwrap();
        let (ps0, ps1) = (0.2, 0.8);
        let pa0 = aux.matrix()[(0, 0)].re;
        let pa1 = aux.matrix()[(1, 1)].re;
        let expected = libm::sin(gamma).powi(2) * (pa0 * ps1 - ps0 * pa1);
        assert_eq!(split.coherent, 0.0);
        assert!((split.diagonal - expected).abs() < 1e-15);
    }

    #[test]
    fn split_matches_conjugation_for_complex_coherence() {
        // a correlated state with complex ⟨01|ρ|10⟩
        let amp = [c64(0.1, 0.0), c64(0.6, 0.0), c64(0.0, 0.7), c64(0.2, 0.1)];
        let norm = libm::sqrt(amp.iter().map(|z| z.norm_sqr()).sum::<f64>());
        let amp = amp.map(|z| z / norm);
        let pure = DensityOperator::pure(&amp).unwrap();
        let rho = DensityOperator::new(
            &pure.matrix().scale(c64(0.8, 0.0)) + &DensityOperator::maximally_mixed(4).matrix().scale(c64(0.2, 0.0)),
        )
        .unwrap();
        for gamma in [0.1, 0.7, 1.3] {
            let post = rho.evolve(&partial_swap(gamma)).unwrap();
            let q = heat(&rho.qubit_marginal(1).unwrap(), &post.qubit_marginal(1).unwrap(), 1.0).unwrap();
            let split = heat_split(&rho, gamma, 1.0).unwrap();
            assert!(split.coherent.abs() > 1e-3);
            assert!((q - split.total()).abs() < 1e-14);
        }
    }

    #[test]
    fn beta_examples() {
        assert!((beta_of(&thermal(), 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((beta_of(&thermal_state(2.0, 1.0).unwrap(), 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!(matches!(
            beta_of(&DensityOperator::maximally_mixed(2), 1.0),
            Err(Error::InfiniteTemperature { .. })
        ));
        let inverted = DensityOperator::new(ComplexMatrix::from_real_diagonal(&[0.7, 0.3])).unwrap();
        assert!(matches!(
            beta_of(&inverted, 1.0),
            Err(Error::NegativeTemperature { .. })
        ));
        assert!(matches!(
            beta_of(&DensityOperator::basis(2, 1), 1.0),
            Err(Error::DegeneratePopulation { .. })
        ));
        let coherent = CollisionParams {
            p: 0.5,
            ..CollisionParams::default()
        }
        .ancilla_state()
        .unwrap();
        assert!(matches!(beta_of(&coherent, 1.0), Err(Error::NotThermalForm { .. })));
    }

    #[test]
    fn mutual_information_examples() {
        assert!(
            mutual_information(&DensityOperator::basis(2, 0).tensor(&thermal()))
                .unwrap()
                .abs()
                < 1e-14
        );
        let q = quantum_correlated_state(0.855).unwrap();
        let w: f64 = 0.855 * 0.855;
        let h = -w * libm::log(w) - (1.0 - w) * libm::log(1.0 - w);
        assert!((mutual_information(&q).unwrap() - 2.0 * h).abs() < 1e-12);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityOperator::pure(&[c64(s, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(s, 0.0)]).unwrap();
        assert!((mutual_information(&bell).unwrap() - 2.0 * core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn first_step_has_no_mutual_information_and_decomposes() {
        let params = CollisionParams::with_coupling(PI / 14.0, PI / 9.0);
        let traj = run(ground_start(), &params, 60, ConstantAncilla(thermal())).unwrap();
        let records = thermo_trace(&traj).unwrap();
        assert!(records[0].mutual_info.abs() < 1e-14);
        for r in &records {
            assert!((r.delta_s - r.decomposition()).abs() < 1e-8);
            assert!((r.heat - (r.heat_dia + r.heat_coh)).abs() < 1e-10);
            assert!(r.rel_entropy_term >= 0.0);
        }
    }

    #[test]
    fn coherent_environment_is_refused() {
        let params = CollisionParams {
            p: 0.5,
            ..CollisionParams::default()
        };
        let start = JointState::product(&DensityOperator::basis(2, 1), &params.auxiliary_state().unwrap()).unwrap();
        let traj = run(start, &params, 3, ConstantAncilla(params.ancilla_state().unwrap())).unwrap();
        assert!(matches!(thermo_trace(&traj), Err(Error::NotThermalForm { .. })));
        // heat is still available
        assert_eq!(heat_series(&traj).unwrap().len(), 3);
    }

    #[test]
    fn alignment_without_interaction_is_flat() {
        let params = CollisionParams::with_coupling(0.0, PI / 9.0);
        let report = alignment_report(&params, 30, SystemStart::Ground).unwrap();
        assert!(report.rows.iter().all(|r| r.heat == 0.0 && r.delta_distance == 0.0));
        assert_eq!(report.gated_steps, 0);
    }

    #[test]
    fn markovian_alignment_distance_only_falls() {
        let params = CollisionParams::with_coupling(PI / 14.0, PI / 6.0);
        let report = alignment_report(&params, 200, SystemStart::Ground).unwrap();
        assert!(report.rows.iter().all(|r| r.delta_distance <= 0.0));
    }
}
