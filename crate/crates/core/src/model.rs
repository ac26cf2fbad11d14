//! Physical building blocks: free Hamiltonians, partial-swap collisions and
//! the initial states of system, auxiliary qubit and ancillas.
//!
//! Basis convention: `|0⟩` is the `+1` eigenvector of `σ_z` (excited, energy
//! `+ω/2`) and `|1⟩` the ground state. Two-qubit matrices use the ordered
//! basis `{|00⟩, |01⟩, |10⟩, |11⟩}` with the system as the first factor.

use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::qmat::{c64, ComplexMatrix, DensityOperator, HermitianOperator, C64};

/// Every physical knob of the model.
///
/// `gamma` and `delta` are the dimensionless S–A_Q and A_Q–ancilla
/// interaction strengths (coupling times interaction time). `p` weights the
/// coherent part of environment states; `phi1` is the ancilla phase and
/// `phi2` the auxiliary-qubit phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionParams {
    pub gamma: f64,
    pub delta: f64,
    pub temperature: f64,
    pub omega_s: f64,
    pub omega_e: f64,
    pub p: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl Default for CollisionParams {
    fn default() -> Self {
        Self {
            gamma: PI / 14.0,
            delta: PI / 6.0,
            temperature: 1.0,
            omega_s: 1.0,
            omega_e: 1.0,
            p: 0.0,
            phi1: 0.0,
            phi2: 0.0,
        }
    }
}

impl CollisionParams {
    pub fn with_coupling(gamma: f64, delta: f64) -> Self {
        Self {
            gamma,
            delta,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_range("gamma", self.gamma, 0.0, FRAC_PI_2)?;
        check_range("delta", self.delta, 0.0, FRAC_PI_2)?;
        check_range("p", self.p, 0.0, 1.0)?;
        check_positive("temperature", self.temperature)?;
        check_positive("omega_s", self.omega_s)?;
        check_positive("omega_e", self.omega_e)?;
        if !self.phi1.is_finite() {
            return Err(invalid("phi1", self.phi1, "must be finite"));
        }
        if !self.phi2.is_finite() {
            return Err(invalid("phi2", self.phi2, "must be finite"));
        }
        Ok(())
    }

    /// Resonance `ω_S = ω_E`, required by the heat bookkeeping.
    pub fn require_resonance(&self) -> Result<f64> {
        if (self.omega_s - self.omega_e).abs() > 1e-12 * self.omega_s.max(self.omega_e) {
            return Err(invalid(
                "omega_e",
                self.omega_e,
                "thermodynamics requires omega_s = omega_e",
            ));
        }
        Ok(self.omega_e)
    }

    /// State of every reservoir ancilla (phase `phi1`).
    pub fn ancilla_state(&self) -> Result<DensityOperator> {
        coherent_ancilla_state(self, self.phi1)
    }

    /// Initial state of the auxiliary qubit (phase `phi2`).
    pub fn auxiliary_state(&self) -> Result<DensityOperator> {
        coherent_ancilla_state(self, self.phi2)
    }
}

fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter { name, value, reason }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(invalid(name, value, "out of range"));
    }
    Ok(())
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(invalid(name, value, "must be positive and finite"));
    }
    Ok(())
}

/// A pure qubit state on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPure {
    pub theta: f64,
    pub phi: f64,
}

impl BlochPure {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_range("theta", theta, 0.0, PI)?;
        if !(0.0..TAU).contains(&phi) {
            return Err(invalid("phi", phi, "out of range"));
        }
        Ok(Self { theta, phi })
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn amplitudes(&self) -> [C64; 2] {
        let (s, c) = (libm::sin(0.5 * self.theta), libm::cos(0.5 * self.theta));
        [c64(c, 0.0), C64::from_polar(s, self.phi)]
    }

    pub fn state(&self) -> DensityOperator {
        pure_qubit(self.amplitudes())
    }
}

fn pure_qubit(amp: [C64; 2]) -> DensityOperator {
    DensityOperator::pure(&amp).expect("normalised amplitudes form a valid state")
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_vec(
        2,
        2,
        alloc::vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)],
    )
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(
        2,
        2,
        alloc::vec![c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)],
    )
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// `ω σ_z / 2`.
pub fn qubit_hamiltonian(omega: f64) -> Result<HermitianOperator> {
    check_positive("omega", omega)?;
    HermitianOperator::new(ComplexMatrix::from_real_diagonal(&[0.5 * omega, -0.5 * omega]))
}

/// `H ⊗ I + I ⊗ H'` for two qubits.
pub fn free_hamiltonian(omega_a: f64, omega_b: f64) -> Result<HermitianOperator> {
    let i2 = ComplexMatrix::identity(2);
    let ha = qubit_hamiltonian(omega_a)?.into_matrix();
    let hb = qubit_hamiltonian(omega_b)?.into_matrix();
    HermitianOperator::new(&ha.kron(&i2) + &i2.kron(&hb))
}

/// Two-qubit SWAP in the ordered product basis.
pub fn swap_operator() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| {
        let swapped = (i % 2) * 2 + i / 2;
        if swapped == j {
            c64(1.0, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

/// Isotropic Heisenberg coupling `XX + YY + ZZ`.
pub fn heisenberg_exchange() -> ComplexMatrix {
    let xx = pauli_x().kron(&pauli_x());
    let yy = pauli_y().kron(&pauli_y());
    let zz = pauli_z().kron(&pauli_z());
    &(&xx + &yy) + &zz
}

/// `cos(angle) I + i sin(angle) SWAP`.
pub fn partial_swap(angle: f64) -> ComplexMatrix {
    let (s, c) = (libm::sin(angle), libm::cos(angle));
    let id = ComplexMatrix::identity(4).scale(c64(c, 0.0));
    let sw = swap_operator().scale(c64(0.0, s));
    &id + &sw
}

/// Excited and ground populations `(p₀, p₁)` of the Gibbs state.
pub(crate) fn gibbs_populations(temperature: f64, omega: f64) -> (f64, f64) {
    let beta_omega = omega / temperature;
    // p₀ = e^{-βω/2}/Z = 1/(1 + e^{βω}); stays finite as T → 0
    let excited = 1.0 / (1.0 + libm::exp(beta_omega));
    let ground = 1.0 / (1.0 + libm::exp(-beta_omega));
    (excited, ground)
}

/// `e^{-βH}/Z` for `H = ωσ_z/2`.
pub fn thermal_state(temperature: f64, omega: f64) -> Result<DensityOperator> {
    check_positive("temperature", temperature)?;
    check_positive("omega", omega)?;
    let (excited, ground) = gibbs_populations(temperature, omega);
    DensityOperator::new(ComplexMatrix::from_real_diagonal(&[excited, ground]))
}

/// `p|ψ⟩⟨ψ| + (1 − p)ρ_β` with
/// `|ψ⟩ = (e^{-βω/4}|0⟩ + e^{i·phase + βω/4}|1⟩)/√Z`.
///
/// The diagonal equals the thermal one for every `p`; the `(0, 1)` entry is
/// `p e^{-i·phase}/Z`.
pub fn coherent_ancilla_state(params: &CollisionParams, phase: f64) -> Result<DensityOperator> {
    check_range("p", params.p, 0.0, 1.0)?;
    check_positive("temperature", params.temperature)?;
    check_positive("omega_e", params.omega_e)?;
    let (excited, ground) = gibbs_populations(params.temperature, params.omega_e);
    // 1/Z = √(p₀ p₁)
    let inv_z = libm::sqrt(excited * ground);
    let off = C64::from_polar(params.p * inv_z, -phase);
    let mut m = ComplexMatrix::from_real_diagonal(&[excited, ground]);
    m[(0, 1)] = off;
    m[(1, 0)] = off.conj();
    DensityOperator::new(m)
}

fn check_xi(xi: f64) -> Result<f64> {
    check_range("xi", xi, 0.0, 1.0)?;
    Ok(xi)
}

/// `|ψ⟩⟨ψ|` with `|ψ⟩ = ξ|01⟩ + √(1−ξ²)|10⟩` (system ⊗ auxiliary).
pub fn quantum_correlated_state(xi: f64) -> Result<DensityOperator> {
    let xi = check_xi(xi)?;
    let rest = libm::sqrt(1.0 - xi * xi);
    let amplitudes = [c64(0.0, 0.0), c64(xi, 0.0), c64(rest, 0.0), c64(0.0, 0.0)];
    DensityOperator::pure(&amplitudes)
}

/// `ξ²|0⟩⟨0| ⊗ |1⟩⟨1| + (1−ξ²)|1⟩⟨1| ⊗ |0⟩⟨0|`.
pub fn classical_correlated_state(xi: f64) -> Result<DensityOperator> {
    let xi = check_xi(xi)?;
    let w = xi * xi;
    DensityOperator::new(ComplexMatrix::from_real_diagonal(&[0.0, w, 1.0 - w, 0.0]))
}

/// The antipodal pure pair
/// `cos(θ/2)|0⟩ + e^{iφ}sin(θ/2)|1⟩`, `sin(θ/2)|0⟩ − e^{iφ}cos(θ/2)|1⟩`.
pub fn orthogonal_pair(b: BlochPure) -> (DensityOperator, DensityOperator) {
    let (s, c) = (libm::sin(0.5 * b.theta), libm::cos(0.5 * b.theta));
    let plus = [c64(c, 0.0), C64::from_polar(s, b.phi)];
    let minus = [c64(s, 0.0), -C64::from_polar(c, b.phi)];
    (pure_qubit(plus), pure_qubit(minus))
}
