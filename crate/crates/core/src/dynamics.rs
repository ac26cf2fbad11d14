//! The collision protocol.
//!
//! One step: the system collides with the auxiliary qubit through
//! `U(γ)`, then the auxiliary qubit collides with a fresh ancilla through
//! `V(δ)` and the ancilla is discarded. The three-qubit embedding is
//! ordered `(S, A_Q, R_j)`, so `V` acts as `I ⊗ U(δ)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{partial_swap, CollisionParams};
use crate::qmat::{c64, partial_trace_matrix, ComplexMatrix, DensityOperator, C64};

/// The two-qubit `S–A_Q` state carried between collisions.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState(DensityOperator);

impl JointState {
    pub fn new(rho: DensityOperator) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: rho.dim(),
            });
        }
        Ok(Self(rho))
    }

    /// `ρ_S ⊗ ρ_AQ`.
    pub fn product(system: &DensityOperator, auxiliary: &DensityOperator) -> Result<Self> {
        Self::new(system.tensor(auxiliary))
    }

    pub fn rho(&self) -> &DensityOperator {
        &self.0
    }

    pub fn system(&self) -> DensityOperator {
        self.0.qubit_marginal(0).expect("4x4 joint state")
    }

    pub fn auxiliary(&self) -> DensityOperator {
        self.0.qubit_marginal(1).expect("4x4 joint state")
    }
}

/// Everything recorded for one collision.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step_index: usize,
    /// After `U`, before `V`.
    pub rho_saq_post_u: DensityOperator,
    pub rho_saq: DensityOperator,
    pub rho_s: DensityOperator,
    pub rho_aq: DensityOperator,
}

impl StepRecord {
    pub fn joint(&self) -> JointState {
        JointState(self.rho_saq.clone())
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: CollisionParams,
    pub initial: JointState,
    pub steps: Vec<StepRecord>,
}

impl Trajectory {
    /// `ρ^{S,A_Q}_n` for `n = 0..=N`.
    pub fn joint_state(&self, n: usize) -> &DensityOperator {
        if n == 0 {
            self.initial.rho()
        } else {
            &self.steps[n - 1].rho_saq
        }
    }

    /// `ρ^S_n` for `n = 0..=N`.
    pub fn system_states(&self) -> Vec<DensityOperator> {
        core::iter::once(self.initial.system())
            .chain(self.steps.iter().map(|s| s.rho_s.clone()))
            .collect()
    }
}

/// Supplies the ancilla consumed by collision `n` (1-based).
pub trait AncillaSource {
    fn ancilla(&mut self, step: usize) -> DensityOperator;
}

/// The same ancilla state at every collision.
#[derive(Debug, Clone)]
pub struct ConstantAncilla(pub DensityOperator);

impl AncillaSource for ConstantAncilla {
    fn ancilla(&mut self, _step: usize) -> DensityOperator {
        self.0.clone()
    }
}

impl<F: FnMut(usize) -> DensityOperator> AncillaSource for F {
    fn ancilla(&mut self, step: usize) -> DensityOperator {
        self(step)
    }
}

/// Pre-built unitaries for one coupling point.
#[derive(Debug, Clone)]
pub struct Collider {
    system_unitary: ComplexMatrix,
    reservoir_unitary: ComplexMatrix,
}

impl Collider {
    pub fn new(params: &CollisionParams) -> Self {
        Self {
            system_unitary: partial_swap(params.gamma),
            reservoir_unitary: ComplexMatrix::identity(2).kron(&partial_swap(params.delta)),
        }
    }

    pub fn system_unitary(&self) -> &ComplexMatrix {
        &self.system_unitary
    }

    /// `I_S ⊗ V(δ)` on `(S, A_Q, R_j)`.
    pub fn reservoir_unitary(&self) -> &ComplexMatrix {
        &self.reservoir_unitary
    }

    pub fn collide(&self, state: &JointState, ancilla: &DensityOperator, step_index: usize) -> Result<StepRecord> {
        if ancilla.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: ancilla.dim(),
            });
        }
        let post_u = state.rho().evolve(&self.system_unitary)?;
        let rho_saq =
            DensityOperator::from_evolved(self.reservoir_stage(post_u.matrix(), ancilla.matrix()).hermitian_part())?;
        let rho_s = rho_saq.qubit_marginal(0)?;
        let rho_aq = rho_saq.qubit_marginal(1)?;
        Ok(StepRecord {
            step_index,
            rho_saq_post_u: post_u,
            rho_saq,
            rho_s,
            rho_aq,
        })
    }

    /// `Tr_R[V (x ⊗ η) V†]`, linear in `x`.
    fn reservoir_stage(&self, x: &ComplexMatrix, ancilla: &ComplexMatrix) -> ComplexMatrix {
        let embedded = x.kron(ancilla).conjugated_by(&self.reservoir_unitary);
        partial_trace_matrix(&embedded, &[2, 2, 2], &[0, 1]).expect("8x8 three-qubit operator")
    }

    /// The full collision applied to an arbitrary 4x4 operator.
    fn map_operator(&self, x: &ComplexMatrix, ancilla: &ComplexMatrix) -> ComplexMatrix {
        self.reservoir_stage(&x.conjugated_by(&self.system_unitary), ancilla)
    }
}

/// One collision at coupling `params`.
pub fn collide(state: &JointState, ancilla: &DensityOperator, params: &CollisionParams) -> Result<StepRecord> {
    Collider::new(params).collide(state, ancilla, 1)
}

/// Runs `n_steps` collisions, drawing a fresh ancilla for each.
pub fn run(
    initial: JointState,
    params: &CollisionParams,
    n_steps: usize,
    mut ancillas: impl AncillaSource,
) -> Result<Trajectory> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter {
            name: "n_steps",
            value: 0.0,
            reason: "at least one collision is required",
        });
    }
    let collider = Collider::new(params);
    let mut steps: Vec<StepRecord> = Vec::with_capacity(n_steps);
    let mut current = initial.clone();
    for n in 1..=n_steps {
        let ancilla = ancillas.ancilla(n);
        let record = collider.collide(&current, &ancilla, n)?;
        current = record.joint();
        steps.push(record);
    }
    Ok(Trajectory {
        params: *params,
        initial,
        steps,
    })
}

/// Row-major vectorisation of a 4x4 `S–A_Q` operator.
pub type JointVec = [C64; 16];

pub fn vectorize(m: &ComplexMatrix) -> JointVec {
    assert!(m.rows() == 4 && m.cols() == 4, "expected a 4x4 operator");
    let mut v = [c64(0.0, 0.0); 16];
    v.copy_from_slice(m.as_slice());
    v
}

/// System block `Tr_{A_Q}` of a vectorised joint operator, as `[a, b, c, d]`
/// for `[[a, b], [c, d]]`.
#[inline]
pub fn system_block(v: &JointVec) -> [C64; 4] {
    // entry (2i + a, 2j + a) lives at 4(2i + a) + 2j + a
    let at = |i: usize, j: usize| v[8 * i + 2 * j] + v[8 * i + 2 * j + 5];
    [at(0, 0), at(0, 1), at(1, 0), at(1, 1)]
}

/// A full collision with a fixed ancilla, as a 16x16 superoperator acting on
/// vectorised `S–A_Q` operators. Exactly the map [`Collider::collide`]
/// applies, precomputed so long sweeps cost one matrix-vector product per
/// step.
#[derive(Debug, Clone)]
pub struct CollisionChannel {
    // row-major 16x16
    entries: Vec<C64>,
}

impl CollisionChannel {
    pub fn new(params: &CollisionParams, ancilla: &DensityOperator) -> Result<Self> {
        if ancilla.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: ancilla.dim(),
            });
        }
        let collider = Collider::new(params);
        let mut entries = alloc::vec![c64(0.0, 0.0); 256];
        for col in 0..16 {
            let mut basis = ComplexMatrix::zeros(4, 4);
            basis[(col / 4, col % 4)] = c64(1.0, 0.0);
            let image = collider.map_operator(&basis, ancilla.matrix());
            for (row, z) in image.as_slice().iter().enumerate() {
                entries[row * 16 + col] = *z;
            }
        }
        Ok(Self { entries })
    }

    #[inline]
    pub fn apply(&self, v: &JointVec) -> JointVec {
        let mut out = [c64(0.0, 0.0); 16];
        for (row, o) in out.iter_mut().enumerate() {
            let coeffs = &self.entries[row * 16..row * 16 + 16];
            *o = coeffs.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }
}
