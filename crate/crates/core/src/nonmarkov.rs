//! Trace-distance non-Markovianity.
//!
//! A pair of system states is evolved through the same collision stream and
//! the distance between them is tracked step by step. Every rise of that
//! distance is information flowing back from the environment; the measure
//! accumulates the rises and maximises over a grid of antipodal pure
//! initial pairs. The grid makes the reported value a lower bound on the
//! continuous maximum.
//!
//! Grid cells are independent, so callers that want data parallelism can
//! map [`PairSweep::evaluate`] over [`GridSpec::points`] and reduce with
//! [`NmResult::max`].

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::dynamics::{system_block, vectorize, CollisionChannel, JointVec};
use crate::error::{Error, Result};
use crate::model::{orthogonal_pair, BlochPure, CollisionParams};
use crate::qmat::{trace_distance, DensityOperator, C64};

/// Increments at or below this are treated as rounding noise.
pub const INCREMENT_THRESHOLD: f64 = 1e-9;
/// A measure above this classifies the dynamics as non-Markovian.
pub const CLASSIFICATION_THRESHOLD: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub increment: f64,
    pub classification: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            increment: INCREMENT_THRESHOLD,
            classification: CLASSIFICATION_THRESHOLD,
        }
    }
}

impl Thresholds {
    pub fn classify(&self, measure: f64) -> Dynamics {
        if measure > self.classification {
            Dynamics::NonMarkovian
        } else {
            Dynamics::Markovian
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dynamics {
    Markovian,
    NonMarkovian,
}

impl Dynamics {
    pub fn as_str(&self) -> &'static str {
        match self {
            Dynamics::Markovian => "Markovian",
            Dynamics::NonMarkovian => "NonMarkovian",
        }
    }
}

/// Grid of Bloch angles: `theta_points` values over `[0, theta_max]`
/// inclusive and `phi_points` values over `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub theta_points: usize,
    pub phi_points: usize,
    pub theta_max: f64,
}

impl GridSpec {
    pub fn new(theta_points: usize, phi_points: usize, theta_max: f64) -> Result<Self> {
        if theta_points < 2 {
            return Err(Error::InvalidParameter {
                name: "theta_points",
                value: theta_points as f64,
                reason: "need at least 2 points",
            });
        }
        if phi_points < 2 {
            return Err(Error::InvalidParameter {
                name: "phi_points",
                value: phi_points as f64,
                reason: "need at least 2 points",
            });
        }
        if !(theta_max > 0.0 && theta_max <= PI) {
            return Err(Error::InvalidParameter {
                name: "theta_max",
                value: theta_max,
                reason: "must lie in (0, pi]",
            });
        }
        Ok(Self {
            theta_points,
            phi_points,
            theta_max,
        })
    }

    /// 31 x 37 over the antipodal-pair hemisphere.
    pub fn measure_default() -> Self {
        Self {
            theta_points: 31,
            phi_points: 37,
            theta_max: FRAC_PI_2,
        }
    }

    /// 13 x 13, for the per-cell maximisation inside phase diagrams.
    pub fn inner_default() -> Self {
        Self {
            theta_points: 13,
            phi_points: 13,
            theta_max: FRAC_PI_2,
        }
    }

    /// 25 x 37 over the full sphere, for the correlated-state witness.
    pub fn witness_default() -> Self {
        Self {
            theta_points: 25,
            phi_points: 37,
            theta_max: PI,
        }
    }

    pub fn theta(&self, i: usize) -> f64 {
        self.theta_max * i as f64 / (self.theta_points - 1) as f64
    }

    pub fn phi(&self, j: usize) -> f64 {
        TAU * j as f64 / self.phi_points as f64
    }

    pub fn len(&self) -> usize {
        self.theta_points * self.phi_points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major over `(theta, phi)`.
    pub fn points(&self) -> impl Iterator<Item = BlochPure> + '_ {
        (0..self.theta_points).flat_map(move |i| {
            (0..self.phi_points).map(move |j| BlochPure {
                theta: self.theta(i),
                phi: self.phi(j),
            })
        })
    }
}

/// Outcome of the maximisation over initial pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct NmResult {
    /// Sum of the increments above the noise threshold.
    pub measure: f64,
    pub argmax: BlochPure,
    /// Distances at the maximising pair, element 0 being the initial one.
    pub distance_series: Vec<f64>,
    /// `D_{n} − D_{n−1}` for `n = 1..=N`.
    pub increments: Vec<f64>,
}

impl NmResult {
    pub fn from_series(argmax: BlochPure, distance_series: Vec<f64>, threshold: f64) -> Self {
        let increments = increments(&distance_series);
        let measure = accumulated_backflow(&increments, threshold);
        Self {
            measure,
            argmax,
            distance_series,
            increments,
        }
    }

    /// The larger of two results; ties keep `self`, so a left fold over the
    /// grid order is deterministic.
    pub fn max(self, other: NmResult) -> NmResult {
        if other.measure > self.measure {
            other
        } else {
            self
        }
    }
}

pub fn increments(series: &[f64]) -> Vec<f64> {
    series.windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn accumulated_backflow(increments: &[f64], threshold: f64) -> f64 {
    increments
        .iter()
        .filter(|&&d| d > threshold)
        .fold(0.0, |acc, d| acc + d)
}

/// `½‖Tr_{A_Q}(a − b)‖₁` for two vectorised joint states.
#[inline]
fn system_distance(a: &JointVec, b: &JointVec) -> f64 {
    let sa = system_block(a);
    let sb = system_block(b);
    half_trace_norm_2x2([sa[0] - sb[0], sa[1] - sb[1], sa[3] - sb[3]])
}

/// `½ Σ|λ|` for the Hermitian 2x2 `[[a, b], [b*, d]]` given as `[a, b, d]`.
#[inline]
fn half_trace_norm_2x2([a, b, d]: [C64; 3]) -> f64 {
    let mean = 0.5 * (a.re + d.re);
    let half_gap = libm::hypot(0.5 * (a.re - d.re), b.norm());
    (0.5 * ((mean - half_gap).abs() + (mean + half_gap).abs())).clamp(0.0, 1.0)
}

/// Evolves system pairs that share an auxiliary-qubit state and an ancilla
/// stream.
#[derive(Debug, Clone)]
pub struct PairSweep {
    channel: CollisionChannel,
    auxiliary: DensityOperator,
    n_steps: usize,
    thresholds: Thresholds,
}

impl PairSweep {
    /// Ancillas are `params.ancilla_state()` at every collision.
    pub fn new(
        params: &CollisionParams,
        auxiliary: &DensityOperator,
        n_steps: usize,
        thresholds: Thresholds,
    ) -> Result<Self> {
        params.validate()?;
        check_steps(n_steps)?;
        check_qubit(auxiliary)?;
        Ok(Self {
            channel: CollisionChannel::new(params, &params.ancilla_state()?)?,
            auxiliary: auxiliary.clone(),
            n_steps,
            thresholds,
        })
    }

    pub fn thresholds(&self) -> Thresholds {
        self.thresholds
    }

    /// `D(ρ_{1,n}, ρ_{2,n})` for `n = 0..=N`.
    pub fn distance_series(&self, r1: &DensityOperator, r2: &DensityOperator) -> Result<Vec<f64>> {
        check_qubit(r1)?;
        check_qubit(r2)?;
        let a = vectorize(r1.tensor(&self.auxiliary).matrix());
        let b = vectorize(r2.tensor(&self.auxiliary).matrix());
        Ok(self.joint_distance_series(a, b))
    }

    fn joint_distance_series(&self, mut a: JointVec, mut b: JointVec) -> Vec<f64> {
        let mut series = Vec::with_capacity(self.n_steps + 1);
        series.push(system_distance(&a, &b));
        for _ in 0..self.n_steps {
            a = self.channel.apply(&a);
            b = self.channel.apply(&b);
            series.push(system_distance(&a, &b));
        }
        series
    }

    /// The antipodal pair at `b` as one grid cell.
    pub fn evaluate(&self, b: BlochPure) -> NmResult {
        let (plus, minus) = orthogonal_pair(b);
        let series = self
            .distance_series(&plus, &minus)
            .expect("qubit pair built from Bloch angles");
        NmResult::from_series(b, series, self.thresholds.increment)
    }

    /// Maximum over every grid cell, in grid order.
    pub fn maximize(&self, grid: &GridSpec) -> NmResult {
        grid.points()
            .map(|b| self.evaluate(b))
            .reduce(NmResult::max)
            .expect("grid has at least four points")
    }
}

fn check_steps(n_steps: usize) -> Result<()> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter {
            name: "n_steps",
            value: 0.0,
            reason: "at least one collision is required",
        });
    }
    Ok(())
}

fn check_qubit(rho: &DensityOperator) -> Result<()> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    Ok(())
}

fn check_joint(rho: &DensityOperator) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Distance series of two system states sharing `aq_init` and the ancilla
/// stream of `params`.
pub fn distance_series(
    pair: (&DensityOperator, &DensityOperator),
    aq_init: &DensityOperator,
    params: &CollisionParams,
    n_steps: usize,
) -> Result<Vec<f64>> {
    PairSweep::new(params, aq_init, n_steps, Thresholds::default())?.distance_series(pair.0, pair.1)
}

/// Accumulated backflow maximised over the antipodal pairs of `grid`.
pub fn nm_measure(
    grid: &GridSpec,
    aq_init: &DensityOperator,
    params: &CollisionParams,
    n_steps: usize,
) -> Result<NmResult> {
    nm_measure_with(grid, aq_init, params, n_steps, Thresholds::default())
}

pub fn nm_measure_with(
    grid: &GridSpec,
    aq_init: &DensityOperator,
    params: &CollisionParams,
    n_steps: usize,
    thresholds: Thresholds,
) -> Result<NmResult> {
    Ok(PairSweep::new(params, aq_init, n_steps, thresholds)?.maximize(grid))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCell {
    pub gamma: f64,
    pub delta: f64,
    pub measure: f64,
    pub class: Dynamics,
}

/// One `(γ, δ)` point of the coupling phase diagram.
pub fn phase_cell(
    gamma: f64,
    delta: f64,
    aq_init: &DensityOperator,
    params: &CollisionParams,
    grid: &GridSpec,
    n_steps: usize,
    thresholds: Thresholds,
) -> Result<PhaseCell> {
    let at = CollisionParams {
        gamma,
        delta,
        ..*params
    };
    let measure = nm_measure_with(grid, aq_init, &at, n_steps, thresholds)?.measure;
    Ok(PhaseCell {
        gamma,
        delta,
        measure,
        class: thresholds.classify(measure),
    })
}

/// Classifies every `(γ, δ)` combination, `gamma`-major.
#[allow(clippy::too_many_arguments)]
pub fn phase_diagram(
    gamma_grid: &[f64],
    delta_grid: &[f64],
    aq_init: &DensityOperator,
    params: &CollisionParams,
    grid: &GridSpec,
    n_steps: usize,
    thresholds: Thresholds,
) -> Result<Vec<PhaseCell>> {
    for &g in gamma_grid {
        check_coupling("gamma", g)?;
    }
    for &d in delta_grid {
        check_coupling("delta", d)?;
    }
    let mut cells = Vec::with_capacity(gamma_grid.len() * delta_grid.len());
    for &g in gamma_grid {
        for &d in delta_grid {
            cells.push(phase_cell(g, d, aq_init, params, grid, n_steps, thresholds)?);
        }
    }
    Ok(cells)
}

fn check_coupling(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value <= FRAC_PI_2) {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "coupling grid must lie in (0, pi/2]",
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceCell {
    pub theta: f64,
    pub phi: f64,
    pub measure: f64,
    pub class: Dynamics,
}

/// Per-pair classification with a coherent environment: the auxiliary qubit
/// starts in the coherent state with phase `phi2`, every ancilla with phase
/// `phi1`.
pub fn coherence_diagram(
    grid: &GridSpec,
    params: &CollisionParams,
    n_steps: usize,
    thresholds: Thresholds,
) -> Result<Vec<CoherenceCell>> {
    let sweep = PairSweep::new(params, &params.auxiliary_state()?, n_steps, thresholds)?;
    Ok(grid.points().map(|b| coherence_cell(&sweep, b)).collect())
}

pub fn coherence_cell(sweep: &PairSweep, b: BlochPure) -> CoherenceCell {
    let measure = sweep.evaluate(b).measure;
    CoherenceCell {
        theta: b.theta,
        phi: b.phi,
        measure,
        class: sweep.thresholds().classify(measure),
    }
}

/// Distances between a correlated trajectory and the one started from the
/// product of its marginals, with the initial-correlation bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedSeries {
    pub series: Vec<f64>,
    /// `D(ρ(0), ρ_S(0) ⊗ ρ_AQ(0))`.
    pub bound: f64,
}

impl CorrelatedSeries {
    pub fn max(&self) -> f64 {
        self.series.iter().copied().fold(0.0, f64::max)
    }
}

pub fn marginal_product(initial: &DensityOperator) -> Result<DensityOperator> {
    check_joint(initial)?;
    Ok(initial.qubit_marginal(0)?.tensor(&initial.qubit_marginal(1)?))
}

pub fn correlated_distance_series(
    initial: &DensityOperator,
    params: &CollisionParams,
    ancilla: &DensityOperator,
    n_steps: usize,
) -> Result<CorrelatedSeries> {
    check_joint(initial)?;
    check_qubit(ancilla)?;
    check_steps(n_steps)?;
    let product = marginal_product(initial)?;
    let bound = trace_distance(initial, &product)?;
    let channel = CollisionChannel::new(params, ancilla)?;
    let mut a = vectorize(initial.matrix());
    let mut b = vectorize(product.matrix());
    let mut series = Vec::with_capacity(n_steps + 1);
    series.push(system_distance(&a, &b));
    for _ in 0..n_steps {
        a = channel.apply(&a);
        b = channel.apply(&b);
        series.push(system_distance(&a, &b));
    }
    Ok(CorrelatedSeries { series, bound })
}

/// Witness for classically correlated inputs.
///
/// The correlated trajectory starts from `initial_classical`; the
/// comparison trajectory from `ψ(θ, φ) ⊗ Tr_S(initial_classical)`. The
/// accumulated backflow of their system distance is maximised over the
/// pure states of `grid` (meant to span the whole sphere, `theta_max = π`).
/// Ancillas are `params.ancilla_state()`.
pub fn correlation_witness(
    initial_classical: &DensityOperator,
    grid: &GridSpec,
    params: &CollisionParams,
    n_steps: usize,
) -> Result<f64> {
    correlation_witness_with(initial_classical, grid, params, n_steps, INCREMENT_THRESHOLD)
}

pub fn correlation_witness_with(
    initial_classical: &DensityOperator,
    grid: &GridSpec,
    params: &CollisionParams,
    n_steps: usize,
    threshold: f64,
) -> Result<f64> {
    let witness = WitnessSweep::new(initial_classical, params, n_steps, threshold)?;
    Ok(grid.points().map(|b| witness.evaluate(b)).fold(0.0, f64::max))
}

/// Shared state for the correlated-input witness: the correlated trajectory
/// is computed once and reused for every comparison state.
#[derive(Debug, Clone)]
pub struct WitnessSweep {
    channel: CollisionChannel,
    correlated: Vec<JointVec>,
    auxiliary: DensityOperator,
    threshold: f64,
}

impl WitnessSweep {
    pub fn new(initial: &DensityOperator, params: &CollisionParams, n_steps: usize, threshold: f64) -> Result<Self> {
        check_joint(initial)?;
        check_steps(n_steps)?;
        params.validate()?;
        let channel = CollisionChannel::new(params, &params.ancilla_state()?)?;
        let mut correlated = Vec::with_capacity(n_steps + 1);
        let mut v = vectorize(initial.matrix());
        correlated.push(v);
        for _ in 0..n_steps {
            v = channel.apply(&v);
            correlated.push(v);
        }
        Ok(Self {
            channel,
            correlated,
            auxiliary: initial.qubit_marginal(1)?,
            threshold,
        })
    }

    /// Accumulated backflow against the comparison state `b`.
    pub fn evaluate(&self, b: BlochPure) -> f64 {
        let start = b.state().tensor(&self.auxiliary);
        let mut v = vectorize(start.matrix());
        let mut series = Vec::with_capacity(self.correlated.len());
        series.push(system_distance(&self.correlated[0], &v));
        for target in &self.correlated[1..] {
            v = self.channel.apply(&v);
            series.push(system_distance(target, &v));
        }
        accumulated_backflow(&increments(&series), self.threshold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run, ConstantAncilla, JointState};
    use crate::model::{classical_correlated_state, quantum_correlated_state, thermal_state};

    fn thermal() -> DensityOperator {
        thermal_state(1.0, 1.0).unwrap()
    }

    fn basis_pair() -> (DensityOperator, DensityOperator) {
        (DensityOperator::basis(2, 0), DensityOperator::basis(2, 1))
    }

    #[test]
    fn grid_points_cover_ranges() {
        let g = GridSpec::new(3, 4, FRAC_PI_2).unwrap();
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts.len(), 12);
        assert_eq!(pts[0], BlochPure { theta: 0.0, phi: 0.0 });
        assert_eq!(pts[11].theta, FRAC_PI_2);
        assert!((pts[11].phi - 1.5 * PI).abs() < 1e-15);
        assert!(GridSpec::new(1, 4, PI).is_err());
        assert!(GridSpec::new(3, 4, 4.0).is_err());
    }

    #[test]
    fn backflow_without_rises_is_positive_zero() {
        let b = accumulated_backflow(&[-0.1, 1e-12, -0.0], INCREMENT_THRESHOLD);
        assert!(b == 0.0 && b.is_sign_positive());
        assert_eq!(accumulated_backflow(&[0.2, -0.1, 0.3], INCREMENT_THRESHOLD), 0.5);
    }

    #[test]
    fn refined_grid_contains_coarse_points() {
        let coarse = GridSpec::new(7, 6, FRAC_PI_2).unwrap();
        let fine = GridSpec::new(13, 12, FRAC_PI_2).unwrap();
        let fine_pts: Vec<_> = fine.points().collect();
        assert!(coarse.points().all(|p| fine_pts.contains(&p)));
    }

    #[test]
    fn series_matches_explicit_trajectories() {
        let params = CollisionParams::with_coupling(PI / 14.0, PI / 9.0);
        let (a, b) = basis_pair();
        let series = distance_series((&a, &b), &thermal(), &params, 25).unwrap();
        let ta = run(
            JointState::product(&a, &thermal()).unwrap(),
            &params,
            25,
            ConstantAncilla(thermal()),
        )
        .unwrap();
        let tb = run(
            JointState::product(&b, &thermal()).unwrap(),
            &params,
            25,
            ConstantAncilla(thermal()),
        )
        .unwrap();
        let sa = ta.system_states();
        let sb = tb.system_states();
        for n in 0..=25 {
            let direct = trace_distance(&sa[n], &sb[n]).unwrap();
            assert!((series[n] - direct).abs() < 1e-13, "step {n}");
        }
    }

    #[test]
    fn frozen_dynamics_give_constant_series() {
        let params = CollisionParams::with_coupling(0.0, PI / 6.0);
        let (a, b) = orthogonal_pair(BlochPure::new(0.7, 2.0).unwrap());
        let series = distance_series((&a, &b), &thermal(), &params, 40).unwrap();
        assert!(series.iter().all(|d| (d - 1.0).abs() < 1e-12));
        let grid = GridSpec::new(5, 5, FRAC_PI_2).unwrap();
        assert_eq!(nm_measure(&grid, &thermal(), &params, 40).unwrap().measure, 0.0);
    }

    #[test]
    fn markovian_point_series_never_rises() {
        let params = CollisionParams::with_coupling(PI / 14.0, PI / 6.0);
        let (a, b) = basis_pair();
        let series = distance_series((&a, &b), &thermal(), &params, 200).unwrap();
        assert!(increments(&series).iter().all(|&d| d <= 0.0));
    }

    #[test]
    fn non_markovian_point_series_rises() {
        let params = CollisionParams::with_coupling(PI / 14.0, PI / 9.0);
        let (a, b) = basis_pair();
        let series = distance_series((&a, &b), &thermal(), &params, 200).unwrap();
        assert!(increments(&series).iter().any(|&d| d > 1e-3));
    }

    #[test]
    fn swapping_pair_members_keeps_series() {
        let params = CollisionParams {
            p: 0.8,
            ..CollisionParams::default()
        };
        let aux = params.auxiliary_state().unwrap();
        let (a, b) = orthogonal_pair(BlochPure::new(1.0, 4.0).unwrap());
        let ab = distance_series((&a, &b), &aux, &params, 80).unwrap();
        let ba = distance_series((&b, &a), &aux, &params, 80).unwrap();
        for (x, y) in ab.iter().zip(&ba) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn nm_result_bookkeeping() {
        let params = CollisionParams::with_coupling(PI / 14.0, PI / 9.0);
        let grid = GridSpec::new(4, 5, FRAC_PI_2).unwrap();
        let res = nm_measure(&grid, &thermal(), &params, 100).unwrap();
        assert!(res.measure > 1e-3);
        assert_eq!(res.increments.len(), 100);
        let recomputed = accumulated_backflow(&increments(&res.distance_series), INCREMENT_THRESHOLD);
        assert_eq!(res.measure, recomputed);
        // D_n ≤ D_0 + accumulated positive increments
        let mut running = res.distance_series[0];
        for (n, inc) in res.increments.iter().enumerate() {
            if *inc > 0.0 {
                running += inc;
            }
            assert!(res.distance_series[n + 1] <= running + 1e-15);
        }
    }

    #[test]
    fn phase_diagram_validates_and_orders_cells() {
        let grid = GridSpec::new(3, 3, FRAC_PI_2).unwrap();
        let params = CollisionParams::default();
        let cells = phase_diagram(
            &[0.1, 0.2],
            &[0.3, 0.4, 0.5],
            &thermal(),
            &params,
            &grid,
            20,
            Thresholds::default(),
        )
        .unwrap();
        assert_eq!(cells.len(), 6);
        assert_eq!((cells[0].gamma, cells[0].delta), (0.1, 0.3));
        assert_eq!((cells[5].gamma, cells[5].delta), (0.2, 0.5));
        assert!(phase_diagram(&[0.0], &[0.3], &thermal(), &params, &grid, 20, Thresholds::default()).is_err());
    }

    #[test]
    fn correlated_series_respects_bound() {
        let params = CollisionParams::default();
        let rho = quantum_correlated_state(0.855).unwrap();
        let res = correlated_distance_series(&rho, &params, &thermal(), 200).unwrap();
        assert!(res.series[0] < 1e-15);
        assert!(res.max() > 1e-2);
        assert!(res.series.iter().all(|&d| d <= res.bound + 1e-10));
    }

    #[test]
    fn classical_correlation_with_thermal_ancillas_is_invisible() {
        let params = CollisionParams::default();
        let rho = classical_correlated_state(0.855).unwrap();
        let res = correlated_distance_series(&rho, &params, &thermal(), 200).unwrap();
        assert!(res.series.iter().all(|&d| d <= 1e-10));
    }

    #[test]
    fn witness_vanishes_without_interaction() {
        let params = CollisionParams {
            p: 0.4,
            ..CollisionParams::with_coupling(0.0, PI / 6.0)
        };
        let rho = classical_correlated_state(0.855).unwrap();
        let grid = GridSpec::new(5, 6, PI).unwrap();
        assert_eq!(correlation_witness(&rho, &grid, &params, 50).unwrap(), 0.0);
    }

    #[test]
    fn wrong_dimensions_are_rejected() {
        let params = CollisionParams::default();
        let joint = DensityOperator::maximally_mixed(4);
        assert!(distance_series((&joint, &joint), &thermal(), &params, 5).is_err());
        assert!(correlated_distance_series(&thermal(), &params, &thermal(), 5).is_err());
        assert!(distance_series((&thermal(), &thermal()), &thermal(), &params, 0).is_err());
    }
}
